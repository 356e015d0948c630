#include "cournot/record.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;
  for (char c : v) {
    if (c == ' ' || c == '"' || c == '=' || c == '\\' || c == '\t' || c == '\n') return true;
  }
  return false;
}

std::string quote(std::string_view v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_record(const Record& rec) {
  std::string out;
  for (const auto& [k, v] : rec) {
    if (!out.empty()) out += ' ';
    out += k;
    out += '=';
    out += needs_quotes(v) ? quote(v) : v;
  }
  return out;
}

Record parse_record(std::string_view line) {
  Record rec;
  std::size_t i = 0;
  const std::size_t n = line.size();
  auto fail = [&](const char* why) {
    raise(ErrorKind::input, std::string("record: ") + why + " at column " + std::to_string(i));
  };
  while (i < n) {
    while (i < n && line[i] == ' ') ++i;
    if (i >= n) break;
    const std::size_t key_start = i;
    while (i < n && line[i] != '=' && line[i] != ' ') ++i;
    if (i >= n || line[i] != '=' || i == key_start) fail("expected key=value");
    std::string key(line.substr(key_start, i - key_start));
    ++i;
    std::string value;
    if (i < n && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        const char c = line[i++];
        if (c == '\\') {
          if (i >= n) fail("dangling escape");
          const char e = line[i++];
          value += (e == 'n') ? '\n' : e;
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          value += c;
        }
      }
      if (!closed) fail("unterminated quote");
      if (i < n && line[i] != ' ') fail("junk after quoted value");
    } else {
      const std::size_t v_start = i;
      while (i < n && line[i] != ' ') ++i;
      value = std::string(line.substr(v_start, i - v_start));
    }
    rec.emplace_back(std::move(key), std::move(value));
  }
  return rec;
}

const std::string* find_field(const Record& rec, std::string_view key) {
  for (const auto& [k, v] : rec) {
    if (k == key) return &v;
  }
  return nullptr;
}

Record to_record(const EquilibriumResult& r) {
  return {{"record", "equilibrium"},
          {"mode", to_string(r.mode)},
          {"x_group", format_double(r.x_group)},
          {"total", format_double(r.total)},
          {"residual", format_double(r.residual)},
          {"iterations", std::to_string(r.iterations)}};
}

Record to_record(const EfficiencyReport& r) {
  return {{"record", "efficiency"},
          {"mode", to_string(r.mode)},
          {"denominator_mode", to_string(r.denominator_mode)},
          {"n_firms", std::to_string(r.n_firms)},
          {"k_groups", std::to_string(r.k_groups)},
          {"x_group", format_double(r.x_group)},
          {"total_nash", format_double(r.total_nash)},
          {"x_bar", format_double(r.x_bar)},
          {"y_max", format_double(r.y_max)},
          {"y_star", format_double(r.y_star)},
          {"r", format_double(r.r)},
          {"r_bar", format_double(r.r_bar)},
          {"delta", format_double(r.delta)},
          {"k_delta", format_double(r.k_delta)},
          {"bound_delta", format_double(r.bound_delta)},
          {"bound_kdelta", format_double(r.bound_kdelta)},
          {"residual", format_double(r.residual)}};
}

Record to_record(const PlannerBenchmarks& b) {
  return {{"record", "planner"},
          {"mode", to_string(b.mode)},
          {"y_max", format_double(b.y_max)},
          {"y_prime", format_double(b.y_prime)}};
}

Record to_record(const ValidationReport& v) {
  Record rec{{"record", "validation"}, {"ok", yes_no(v.ok())}};
  for (const auto& c : v.checks) {
    rec.emplace_back(c.name, c.passed ? "pass" : "fail");
    if (!c.passed && c.first_violation) rec.emplace_back(c.name + "_at", format_double(*c.first_violation));
  }
  return rec;
}

}  // namespace cournot
