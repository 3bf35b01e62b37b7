#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "infolaw/enumerator.hpp"
#include "infolaw/error.hpp"

namespace infolaw {
namespace {

constexpr int kFormatVersion = 1;

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::malformed_file, std::string("bad ") + what + ": \"" + std::string(text) + "\"");
  }
  return value;
}

BitString parse_bits(std::string_view text) {
  try {
    return BitString::parse(text);
  } catch (const Error&) {
    throw Error(Errc::malformed_file, "bad bit string field \"" + std::string(text) + "\"");
  }
}

}  // namespace

void write_table(std::ostream& os, const ComplexityTable& table) {
  std::size_t entries = 0, hist_rows = 0;
  os << "# infolaw complexity table\n";
  os << "# format_version=" << kFormatVersion << '\n';
  os << "# machine_id=" << machine_name(table.machine) << '\n';
  os << "# max_len=" << table.max_len << '\n';
  os << "# budget=" << table.budget << '\n';
  for (const auto& [x, slice] : table.slices) os << "# condition=" << x.text() << '\n';
  os << "condition,output,K\n";
  for (const auto& [x, slice] : table.slices) {
    const std::string cond = x.text();
    for (const auto& [y, k] : slice.k) {
      os << cond << ',' << y.text() << ',' << k << '\n';
      ++entries;
    }
  }
  os << "#HIST\n";
  os << "condition,length,count\n";
  for (const auto& [x, slice] : table.slices) {
    const std::string cond = x.text();
    for (std::size_t l = 0; l < slice.length_histogram.size(); ++l) {
      if (slice.length_histogram[l] == 0) continue;
      os << cond << ',' << l << ',' << slice.length_histogram[l] << '\n';
      ++hist_rows;
    }
  }
  os << "#END entries=" << entries << " hist=" << hist_rows << '\n';
}

ComplexityTable read_table(std::istream& is) {
  ComplexityTable table;
  std::string line;
  int version = -1;
  bool have_machine = false, have_len = false, have_budget = false;
  enum class Section { header, entries, hist, done } section = Section::header;
  std::size_t entries = 0, hist_rows = 0;

  auto slice = [&](const BitString& x) -> ConditionSlice& {
    auto [it, inserted] = table.slices.try_emplace(x);
    if (inserted) {
      if (section != Section::header) throw Error(Errc::malformed_file, "row for undeclared condition");
      it->second.condition = x;
      it->second.length_histogram.assign(table.max_len + 1, 0);
    }
    return it->second;
  };

  while (std::getline(is, line)) {
    if (section == Section::done) {
      if (!line.empty()) throw Error(Errc::malformed_file, "content after #END");
      continue;
    }
    if (section == Section::header) {
      if (line.rfind("# ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(2, eq - 2);
        const std::string_view value = std::string_view(line).substr(eq + 1);
        if (key == "format_version") {
          version = parse_number<int>(value, "format version");
        } else if (key == "machine_id") {
          table.machine = parse_machine_id(value);
          have_machine = true;
        } else if (key == "max_len") {
          table.max_len = parse_number<unsigned>(value, "max_len");
          if (table.max_len > kMaxProgramBits) throw Error(Errc::malformed_file, "max_len out of range");
          have_len = true;
        } else if (key == "budget") {
          table.budget = parse_number<std::uint64_t>(value, "budget");
          have_budget = true;
        } else if (key == "condition") {
          if (!have_len) throw Error(Errc::malformed_file, "condition listed before max_len");
          slice(parse_bits(value));
        }
        continue;
      }
      if (line != "condition,output,K") throw Error(Errc::malformed_file, "missing table header row");
      if (version < 0 || !have_machine || !have_len || !have_budget) {
        throw Error(Errc::malformed_file, "incomplete metadata header");
      }
      if (version != kFormatVersion) {
        throw Error(Errc::version_mismatch, "table format version " + std::to_string(version) +
                                                ", expected " + std::to_string(kFormatVersion));
      }
      section = Section::entries;
      continue;
    }
    if (line == "#HIST") {
      if (section != Section::entries || !std::getline(is, line) || line != "condition,length,count") {
        throw Error(Errc::malformed_file, "bad #HIST section");
      }
      section = Section::hist;
      continue;
    }
    if (line.rfind("#END", 0) == 0) {
      const std::string expect =
          "#END entries=" + std::to_string(entries) + " hist=" + std::to_string(hist_rows);
      if (section != Section::hist || line != expect) throw Error(Errc::malformed_file, "row count mismatch");
      section = Section::done;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3) throw Error(Errc::malformed_file, "expected 3 fields: \"" + line + "\"");
    const BitString x = parse_bits(fields[0]);
    if (section == Section::entries) {
      const BitString y = parse_bits(fields[1]);
      const auto k = parse_number<unsigned>(fields[2], "K value");
      if (k > table.max_len) throw Error(Errc::malformed_file, "K value above max_len");
      if (!slice(x).k.emplace(y, k).second) throw Error(Errc::malformed_file, "duplicate entry");
      ++entries;
    } else {
      const auto l = parse_number<std::size_t>(fields[1], "program length");
      const auto count = parse_number<std::uint64_t>(fields[2], "program count");
      if (l > table.max_len) throw Error(Errc::malformed_file, "program length above max_len");
      slice(x).length_histogram[l] = count;
      ++hist_rows;
    }
  }
  if (section != Section::done) throw Error(Errc::malformed_file, "truncated table file");
  return table;
}

void save_table(const ComplexityTable& table, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  write_table(os, table);
  if (!os) throw Error(Errc::io_error, "write failed for " + path.string());
}

ComplexityTable load_table(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot read " + path.string());
  return read_table(is);
}

}  // namespace infolaw
