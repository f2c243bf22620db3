#include "srkpa/pcs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>

namespace srkpa {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

std::string render_bound(const ParamDef& p, double v) {
  return p.kind == ParamKind::Integer ? std::to_string(static_cast<long long>(v)) : shortest(v);
}

}  // namespace

std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Integer: return "integer";
    case ParamKind::Real: return "real";
    case ParamKind::Categorical: return "categorical";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Default: return "default";
    case Provenance::Sampled: return "sampled";
    case Provenance::User: return "user";
  }
  return "?";
}

std::optional<std::string> ParamDef::canonical(std::string_view value) const {
  switch (kind) {
    case ParamKind::Integer: {
      const auto v = parse_int(value);
      if (!v || *v < lo || *v > hi) return std::nullopt;
      return std::to_string(*v);
    }
    case ParamKind::Real: {
      const auto v = parse_real(value);
      if (!v || *v < lo || *v > hi) return std::nullopt;
      return shortest(*v);
    }
    case ParamKind::Categorical:
      if (std::find(choices.begin(), choices.end(), value) == choices.end()) return std::nullopt;
      return std::string(value);
  }
  return std::nullopt;
}

const ParamDef* ParamSpace::find(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

PcsError::PcsError(std::size_t line, const std::string& what)
    : InputError(line ? "pcs line " + std::to_string(line) + ": " + what : "pcs: " + what), line_(line) {}

ParamSpace parse_pcs(std::string_view text) {
  static const std::regex numeric(
      R"(^([A-Za-z_][\w.-]*)\s*\[\s*([^,\]\s]+)\s*,\s*([^\]\s]+)\s*\]\s*\[\s*([^\]\s]+)\s*\]\s*(i?)$)");
  static const std::regex categorical(R"(^([A-Za-z_][\w.-]*)\s*\{([^}]*)\}\s*\[\s*([^\]\s]+)\s*\]$)");
  ParamSpace space;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    ParamDef p;
    std::smatch m;
    if (std::regex_match(line, m, numeric)) {
      p.name = m[1];
      p.kind = m[5].length() ? ParamKind::Integer : ParamKind::Real;
      if (p.kind == ParamKind::Integer) {
        const auto lo = parse_int(m[2].str()), hi = parse_int(m[3].str());
        if (!lo || !hi) throw PcsError(line_no, "integer bounds expected for '" + p.name + "'");
        p.lo = static_cast<double>(*lo);
        p.hi = static_cast<double>(*hi);
      } else {
        const auto lo = parse_real(m[2].str()), hi = parse_real(m[3].str());
        if (!lo || !hi) throw PcsError(line_no, "numeric bounds expected for '" + p.name + "'");
        p.lo = *lo;
        p.hi = *hi;
      }
      if (p.lo > p.hi) throw PcsError(line_no, "empty range for '" + p.name + "'");
      const auto def = p.canonical(m[4].str());
      if (!def) throw PcsError(line_no, "default '" + m[4].str() + "' outside the range of '" + p.name + "'");
      p.default_value = *def;
    } else if (std::regex_match(line, m, categorical)) {
      p.name = m[1];
      p.kind = ParamKind::Categorical;
      const std::string body = m[2];
      std::size_t start = 0;
      for (;;) {
        const auto comma = body.find(',', start);
        const std::string v = trim(std::string_view(body).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (v.empty()) throw PcsError(line_no, "empty value in the set of '" + p.name + "'");
        if (std::find(p.choices.begin(), p.choices.end(), v) != p.choices.end())
          throw PcsError(line_no, "repeated value '" + v + "' in '" + p.name + "'");
        p.choices.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      const auto def = p.canonical(m[3].str());
      if (!def) throw PcsError(line_no, "default '" + m[3].str() + "' is not a value of '" + p.name + "'");
      p.default_value = *def;
    } else {
      throw PcsError(line_no, "cannot parse '" + line + "'");
    }
    if (!names.insert(p.name).second) throw PcsError(line_no, "duplicate parameter '" + p.name + "'");
    space.params.push_back(std::move(p));
  }
  return space;
}

std::string write_pcs(const ParamSpace& space) {
  std::string out;
  for (const auto& p : space.params) {
    out += p.name;
    if (p.kind == ParamKind::Categorical) {
      out += " {";
      for (std::size_t i = 0; i < p.choices.size(); ++i) out += (i ? ", " : "") + p.choices[i];
      out += "} [" + p.default_value + "]";
    } else {
      out += " [" + render_bound(p, p.lo) + ", " + render_bound(p, p.hi) + "] [" + p.default_value + "]";
      if (p.kind == ParamKind::Integer) out += "i";
    }
    out += "\n";
  }
  return out;
}

std::string Configuration::id() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : values) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, h, 16);
  std::string s(buf, end);
  return std::string(16 - s.size(), '0') + s;
}

const std::string& Configuration::get(std::string_view name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  throw std::out_of_range("configuration has no parameter '" + std::string(name) + "'");
}

std::vector<Flag> Configuration::flags() const {
  std::vector<Flag> out;
  for (const auto& [k, v] : values) out.push_back({k, v});
  return out;
}

Configuration default_config(const ParamSpace& space) {
  Configuration c;
  for (const auto& p : space.params) c.values.emplace_back(p.name, p.default_value);
  c.provenance = Provenance::Default;
  return c;
}

Configuration sample_config(const ParamSpace& space, std::mt19937_64& rng) {
  Configuration c;
  c.provenance = Provenance::Sampled;
  for (const auto& p : space.params) {
    std::string v;
    switch (p.kind) {
      case ParamKind::Integer:
        v = std::to_string(std::uniform_int_distribution<long long>(static_cast<long long>(p.lo),
                                                                    static_cast<long long>(p.hi))(rng));
        break;
      case ParamKind::Real: {
        const double x = p.lo == p.hi ? p.lo : std::uniform_real_distribution<double>(p.lo, p.hi)(rng);
        v = shortest(std::clamp(x, p.lo, p.hi));
        break;
      }
      case ParamKind::Categorical:
        v = p.choices[std::uniform_int_distribution<std::size_t>(0, p.choices.size() - 1)(rng)];
        break;
    }
    c.values.emplace_back(p.name, std::move(v));
  }
  return c;
}

void validate_config(const ParamSpace& space, const Configuration& config) {
  if (config.values.size() != space.params.size())
    throw InputError("configuration has " + std::to_string(config.values.size()) + " values, space has " +
                     std::to_string(space.params.size()) + " parameters");
  for (std::size_t i = 0; i < space.params.size(); ++i) {
    const auto& p = space.params[i];
    const auto& [name, value] = config.values[i];
    if (name != p.name) throw InputError("configuration value '" + name + "' out of order, expected '" + p.name + "'");
    const auto c = p.canonical(value);
    if (!c || *c != value) throw InputError("illegal value '" + value + "' for '" + p.name + "'");
  }
}

Configuration config_from_flags(const ParamSpace& space, const std::vector<Flag>& flags) {
  Configuration c = default_config(space);
  c.provenance = Provenance::User;
  for (const auto& f : flags) {
    const ParamDef* p = space.find(f.name);
    if (!p) throw InputError("flag --" + f.name + " is not in the configuration space");
    const auto v = p->canonical(f.value);
    if (!v) throw InputError("illegal value '" + f.value + "' for --" + f.name);
    const auto idx = static_cast<std::size_t>(p - space.params.data());
    c.values[idx].second = *v;
  }
  return c;
}

}  // namespace srkpa
