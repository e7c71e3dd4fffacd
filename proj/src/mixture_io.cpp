#include "epflow/mixture_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace epflow::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// locale-independent number parsing
double parse_number(const std::string& token, const std::string& context) {
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{}) {
    throw parse_error(context + ": '" + token + "' is not a number");
  }
  if (res.ptr != token.data() + token.size()) {
    throw parse_error(context + ": trailing junk in '" + token + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

LoadedMixture parse_mixture_spec(std::istream& in, const std::string& origin) {
  std::vector<MixtureComponent> components;
  std::string name;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw parse_error(where + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") {
      name = value;
    } else if (key == "component") {
      std::istringstream fields(value);
      std::vector<std::string> tokens;
      std::string tok;
      while (fields >> tok) tokens.push_back(tok);
      const std::string ctx =
          where + ": component " + std::to_string(components.size() + 1);
      if (tokens.size() != 3) {
        throw parse_error(ctx + ": expected 'weight mean variance', got " +
                          std::to_string(tokens.size()) + " fields");
      }
      MixtureComponent c;
      c.weight = parse_number(tokens[0], ctx + " weight");
      c.mean = parse_number(tokens[1], ctx + " mean");
      c.variance = parse_number(tokens[2], ctx + " variance");
      components.push_back(c);
    } else {
      throw parse_error(where + ": unknown key '" + key + "'");
    }
  }
  if (components.empty()) {
    throw parse_error(origin + ": no components found");
  }

  LoadedMixture out{MixtureSpec(components), name, {}};
  if (out.spec.weight_sum_deviation() > kWeightSumExact) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, out.spec.weight_sum_deviation(),
                                   std::chars_format::general, 3);
    out.warnings.push_back("weights were off by " + std::string(buf, res.ptr) +
                           " and have been renormalized");
  }
  return out;
}

LoadedMixture load_mixture_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open mixture spec '" + path + "'");
  try {
    return parse_mixture_spec(in, path);
  } catch (const invalid_input& e) {
    // validation failures surface as parse errors with the file named
    throw parse_error(path + ": " + e.what());
  }
}

std::string format_mixture_spec(const MixtureSpec& spec, const std::string& name) {
  std::ostringstream out;
  if (!name.empty()) out << "name = " << name << "\n";
  for (const auto& c : spec.components()) {
    out << "component = " << format_number(c.weight) << ' ' << format_number(c.mean) << ' '
        << format_number(c.variance) << '\n';
  }
  return out.str();
}

}  // namespace epflow::io
