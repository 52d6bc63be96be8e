#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "spincs/nmr_dynamics.hpp"

// Line-oriented pulse programs (.pseq):
//
//   pulse <angle> <phase> [finite]
//   delay <number> s|ms|us
//   zrot <angle> composite|direct
//   # comment
//
// Angles are radians, optionally suffixed with "pi" (0.5pi). Phases are
// x, y, -x, -y or an angle.

namespace spincs {

struct SourceProgram {
  std::string text;
  std::string provenance = "<inline>";
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::vector<PulseEvent> events;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }
};

inline std::string format_diagnostic(const ParseDiagnostic& d, std::string_view provenance) {
  std::string out(provenance);
  out += ':' + std::to_string(d.line) + ':' + std::to_string(d.column) + ": ";
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  return out;
}

namespace dsl {

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+') return std::nullopt;
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<double> parse_angle(std::string_view s) {
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    auto head = s.substr(0, s.size() - 2);
    if (head.empty() || head == "+") return kPi;
    if (head == "-") return -kPi;
    auto v = parse_number(head);
    if (!v) return std::nullopt;
    const double r = *v * kPi;
    if (!std::isfinite(r)) return std::nullopt;
    return r;
  }
  return parse_number(s);
}

inline std::optional<double> parse_phase(std::string_view s) {
  if (s == "x") return kPhaseX;
  if (s == "y") return kPhaseY;
  if (s == "-x") return kPhaseMinusX;
  if (s == "-y") return kPhaseMinusY;
  return parse_angle(s);
}

inline std::optional<double> unit_scale(std::string_view u) {
  if (u == "s") return 1.0;
  if (u == "ms") return 1e3;
  if (u == "us") return 1e6;
  return std::nullopt;
}

inline std::string shortest(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_angle(double v) {
  if (v == 0.0) return "0";
  const double k = std::round(v / (kPi / 16));
  if (k != 0 && std::abs(v - k * kPi / 16) <= 1e-12) {
    const double frac = k / 16.0;
    if (frac * kPi == v) {
      if (frac == 1.0) return "pi";
      if (frac == -1.0) return "-pi";
      return shortest(frac) + "pi";
    }
  }
  return shortest(v);
}

inline std::string format_phase(double v) {
  if (v == kPhaseX) return "x";
  if (v == kPhaseY) return "y";
  if (v == kPhaseMinusX) return "-x";
  if (v == kPhaseMinusY) return "-y";
  return format_angle(v);
}

// Picks the unit that reads naturally and still parses back to the same double.
inline std::string format_duration(double seconds) {
  const char* order[3];
  const double a = std::abs(seconds);
  if (a >= 1.0 || a == 0.0) {
    order[0] = "s", order[1] = "ms", order[2] = "us";
  } else if (a >= 1e-3) {
    order[0] = "ms", order[1] = "us", order[2] = "s";
  } else {
    order[0] = "us", order[1] = "ms", order[2] = "s";
  }
  for (const char* u : order) {
    const double scale = *unit_scale(u);
    const std::string num = shortest(seconds * scale);
    auto back = parse_number(num);
    if (back && *back / scale == seconds) return num + " " + u;
  }
  return shortest(seconds) + " s";
}

struct Token {
  std::string_view text;
  int column;
};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// Keeps diagnostics readable when the offending token is binary junk.
inline std::string quoted(std::string_view s) {
  std::string out = "'";
  for (unsigned char c : s.substr(0, 40)) {
    if (c >= 0x20 && c < 0x7f) {
      out += static_cast<char>(c);
    } else {
      static const char* hex = "0123456789abcdef";
      out += "\\x";
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  if (s.size() > 40) out += "...";
  return out + "'";
}

}  // namespace dsl

inline ParseResult parse_program(const SourceProgram& src) {
  ParseResult res;
  std::string_view text = src.text;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    const auto toks = dsl::tokenize(line);
    if (toks.empty()) continue;
    auto err = [&](const dsl::Token& t, std::string msg) {
      res.diagnostics.push_back({line_no, t.column, std::move(msg), Severity::Error});
    };
    auto warn = [&](const dsl::Token& t, std::string msg) {
      res.diagnostics.push_back({line_no, t.column, std::move(msg), Severity::Warning});
    };
    const auto& kw = toks[0];
    std::size_t used = 1;

    if (kw.text == "pulse") {
      std::optional<double> angle, phase;
      if (toks.size() < 2) {
        err(kw, "pulse: missing angle");
      } else if (!(angle = dsl::parse_angle(toks[1].text))) {
        err(toks[1], "pulse: invalid angle " + dsl::quoted(toks[1].text));
      }
      if (toks.size() >= 2 && toks.size() < 3) {
        err(kw, "pulse: missing phase");
      } else if (toks.size() >= 3 && !(phase = dsl::parse_phase(toks[2].text))) {
        err(toks[2], "pulse: invalid phase " + dsl::quoted(toks[2].text));
      }
      used = std::min<std::size_t>(toks.size(), 3);
      bool finite = false;
      if (toks.size() >= 4 && toks[3].text == "finite") {
        finite = true;
        used = 4;
      }
      if (angle && phase) {
        if (finite && *angle < 0) {
          err(toks[1], "pulse: finite pulse needs a non-negative angle");
        } else {
          if (finite && *angle == 0) warn(toks[1], "pulse: zero-angle finite pulse has no effect");
          res.events.push_back(finite ? PulseEvent::finite(*angle, *phase) : PulseEvent::ideal(*angle, *phase));
        }
      }
    } else if (kw.text == "delay") {
      std::optional<double> value, scale;
      if (toks.size() < 2) {
        err(kw, "delay: missing duration");
      } else if ((value = dsl::parse_number(toks[1].text))) {
        used = 2;
        if (toks.size() < 3) {
          err(kw, "delay: missing time unit (s, ms or us)");
        } else if (!(scale = dsl::unit_scale(toks[2].text))) {
          err(toks[2], "delay: unknown time unit " + dsl::quoted(toks[2].text));
        }
        used = std::min<std::size_t>(toks.size(), 3);
      } else {
        // fused form such as 500ms
        auto t = toks[1].text;
        for (std::string_view u : {"ms", "us", "s"}) {
          if (t.size() > u.size() && t.substr(t.size() - u.size()) == u) {
            value = dsl::parse_number(t.substr(0, t.size() - u.size()));
            if (value) {
              scale = dsl::unit_scale(u);
              break;
            }
          }
        }
        if (!value) err(toks[1], "delay: invalid duration " + dsl::quoted(t));
        used = 2;
      }
      if (value && scale) {
        if (*value < 0) {
          err(toks[1], "delay: negative duration");
        } else {
          res.events.push_back(PulseEvent::delay(*value / *scale));
        }
      }
    } else if (kw.text == "zrot") {
      std::optional<double> angle;
      if (toks.size() < 2) {
        err(kw, "zrot: missing angle");
      } else if (!(angle = dsl::parse_angle(toks[1].text))) {
        err(toks[1], "zrot: invalid angle " + dsl::quoted(toks[1].text));
      }
      std::optional<bool> composite;
      if (toks.size() == 2) {
        err(kw, "zrot: expected 'composite' or 'direct'");
      } else if (toks.size() >= 3) {
        if (toks[2].text == "composite") {
          composite = true;
        } else if (toks[2].text == "direct") {
          composite = false;
        } else {
          err(toks[2], "zrot: expected 'composite' or 'direct', got " + dsl::quoted(toks[2].text));
        }
      }
      used = std::min<std::size_t>(toks.size(), 3);
      if (angle && composite)
        res.events.push_back(*composite ? PulseEvent::composite_zrot(*angle) : PulseEvent::direct_zrot(*angle));
    } else {
      err(kw, "unknown statement " + dsl::quoted(kw.text) + " (expected pulse, delay or zrot)");
      used = toks.size();
    }
    for (std::size_t k = used; k < toks.size(); ++k) err(toks[k], "unexpected token " + dsl::quoted(toks[k].text));
    if (eol == text.size()) break;
  }
  if (!res.ok()) res.events.clear();
  return res;
}

inline std::string format_event(const PulseEvent& e) {
  switch (e.kind) {
    case EventKind::IdealPulse: return "pulse " + dsl::format_angle(e.angle) + " " + dsl::format_phase(e.phase);
    case EventKind::FinitePulse:
      return "pulse " + dsl::format_angle(e.angle) + " " + dsl::format_phase(e.phase) + " finite";
    case EventKind::Delay: return "delay " + dsl::format_duration(e.duration);
    case EventKind::CompositeZRot: return "zrot " + dsl::format_angle(e.angle) + " composite";
    case EventKind::DirectZRot: return "zrot " + dsl::format_angle(e.angle) + " direct";
  }
  return {};
}

// FinitePulse durations are not part of the text form; they are derived from
// omega_1 when the program is simulated.
inline SourceProgram format_program(const std::vector<PulseEvent>& events) {
  SourceProgram p;
  p.provenance = "<formatted>";
  for (const auto& e : events) p.text += format_event(e) + "\n";
  return p;
}

// Random valid program, mixing pi-rational and arbitrary angles.
template <class Rng>
std::vector<PulseEvent> random_program(Rng& rng, int n_events) {
  std::uniform_int_distribution<int> kind(0, 4), coin(0, 1), k16(-32, 32), named(0, 3);
  std::uniform_real_distribution<double> real(-4 * kPi, 4 * kPi), expo(-7.0, 1.0);
  auto angle = [&] { return coin(rng) ? k16(rng) / 16.0 * kPi : real(rng); };
  auto phase = [&] {
    constexpr double names[] = {kPhaseX, kPhaseY, kPhaseMinusX, kPhaseMinusY};
    return coin(rng) ? names[named(rng)] : angle();
  };
  std::vector<PulseEvent> out;
  for (int i = 0; i < n_events; ++i) {
    switch (kind(rng)) {
      case 0: out.push_back(PulseEvent::ideal(angle(), phase())); break;
      case 1: out.push_back(PulseEvent::finite(std::abs(angle()), phase())); break;
      case 2: {
        constexpr double usual[] = {0.5, 2.5e-6, 8e-6, 1e-3};
        const double t = coin(rng) ? std::pow(10.0, expo(rng)) : usual[named(rng)];
        out.push_back(PulseEvent::delay(t));
        break;
      }
      case 3: out.push_back(PulseEvent::composite_zrot(angle())); break;
      default: out.push_back(PulseEvent::direct_zrot(angle())); break;
    }
  }
  return out;
}

}  // namespace spincs
