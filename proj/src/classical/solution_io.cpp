#include "fkent/solution_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fkent {

namespace {

constexpr std::string_view magic = "fkent-solution";

std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw error(errc::config_error, "bad number '" + std::string(token) + "' in solution record");
  return v;
}

std::string expect_line(std::istream& in, std::string_view key) {
  std::string line;
  if (!std::getline(in, line)) throw error(errc::config_error, "solution record truncated before '" + std::string(key) + "'");
  if (line.rfind(key, 0) != 0 || (line.size() > key.size() && line[key.size()] != ' '))
    throw error(errc::config_error, "expected '" + std::string(key) + "', got '" + line + "'");
  return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
}

}  // namespace

void write_solution(std::ostream& out, const classical_solution& s) {
  out << magic << ' ' << solution_record_version << '\n';
  out << "N " << s.spec.N << '\n';
  out << "g " << exact(s.spec.g) << '\n';
  out << "boundary " << to_string(s.spec.bc) << '\n';
  out << "anchors " << exact(s.spec.left_anchor) << ' ' << exact(s.spec.right_anchor) << '\n';
  out << "sector " << to_string(s.kind) << '\n';
  out << "energy " << exact(s.energy) << '\n';
  out << "centers " << s.centers.size();
  for (double c : s.centers) out << ' ' << exact(c);
  out << '\n';
  out << "params " << s.params.size() << '\n';
  for (const auto& [k, v] : s.params) out << k << ' ' << exact(v) << '\n';
  out << "phi\n";
  for (Eigen::Index i = 0; i < s.phi.size(); ++i) out << exact(s.phi[i]) << '\n';
  out << "end\n";
}

classical_solution read_solution(std::istream& in) {
  const std::string version = expect_line(in, magic);
  if (version != std::to_string(solution_record_version))
    throw error(errc::config_error, "unsupported solution record version '" + version + "'");

  classical_solution s;
  s.spec.N = int(parse_double(expect_line(in, "N")));
  s.spec.g = parse_double(expect_line(in, "g"));
  s.spec.bc = parse_boundary(expect_line(in, "boundary"));
  {
    std::istringstream a(expect_line(in, "anchors"));
    std::string l, r;
    a >> l >> r;
    s.spec.left_anchor = parse_double(l);
    s.spec.right_anchor = parse_double(r);
  }
  s.kind = parse_sector(expect_line(in, "sector"));
  s.energy = parse_double(expect_line(in, "energy"));
  {
    std::istringstream c(expect_line(in, "centers"));
    std::size_t count = 0;
    c >> count;
    for (std::size_t i = 0; i < count; ++i) {
      std::string tok;
      if (!(c >> tok)) throw error(errc::config_error, "centers line shorter than its count");
      s.centers.push_back(parse_double(tok));
    }
  }
  const auto param_count = std::stoul(expect_line(in, "params"));
  for (std::size_t i = 0; i < param_count; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw error(errc::config_error, "solution record truncated in params");
    const auto space = line.find(' ');
    if (space == std::string::npos) throw error(errc::config_error, "malformed param line '" + line + "'");
    s.params[line.substr(0, space)] = parse_double(std::string_view(line).substr(space + 1));
  }
  expect_line(in, "phi");
  s.spec.validate();
  s.phi.resize(s.spec.N);
  std::string line;
  for (int i = 0; i < s.spec.N; ++i) {
    if (!std::getline(in, line)) throw error(errc::config_error, "solution record holds fewer than N values");
    s.phi[i] = parse_double(line);
  }
  expect_line(in, "end");
  return s;
}

void save_solution(const std::filesystem::path& path, const classical_solution& solution) {
  std::ofstream out(path);
  if (!out) throw error(errc::config_error, "cannot write " + path.string());
  write_solution(out, solution);
}

classical_solution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config_error, "cannot read " + path.string());
  return read_solution(in);
}

}  // namespace fkent
