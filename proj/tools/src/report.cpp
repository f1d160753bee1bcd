#include "trieig/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

namespace trieig::cli {

Json ext_json(const ExtScalar& v) {
  Json j;
  j["value"] = v.to_string();
  j["log2"] = v.is_zero() ? Json(nullptr) : Json(v.log2_abs());
  return j;
}

Json exact_json(const Rational& v) {
  Json j;
  j["value"] = to_string(v);
  j["log2"] = v == 0 ? Json(nullptr) : Json(log2_abs(v));
  return j;
}

Json number_or_ext(const ExtScalar& v) {
  if (const auto d = v.to_native()) return *d;
  return ext_json(v);
}

namespace {

void write(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write(value, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        write(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // Keep the value a float when read back.
      if (std::string_view(buf).find_first_of(".e") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  write(j, 0, out);
  out += "\n";
  return out;
}

const char* to_string(Shape s) { return s == Shape::Lower ? "lower" : "upper"; }

Json params_json(const MatrixParams& p) {
  Json j;
  j["m"] = p.m;
  j["a"] = p.a;
  j["b"] = p.b;
  j["c"] = p.c;
  if (p.b != 0.0) {
    const GammaRatio g = GammaRatio::from_params(p);
    if (g.is_exact()) {
      j["gamma"] = to_string(g.exact_value());
      j["gamma_kind"] = "exact";
    } else {
      j["gamma"] = g.value();
      j["gamma_kind"] = "float";
    }
  } else {
    j["gamma"] = nullptr;
    j["gamma_kind"] = nullptr;
  }
  j["orientation"] = to_string(p.orientation);
  return j;
}

}  // namespace trieig::cli
