#include "mhfseg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhfseg/error.hpp"

namespace mhfseg {

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::L1: return "l1";
    case MeasureKind::L2: return "l2";
    case MeasureKind::Linf: return "linf";
    case MeasureKind::Cosine: return "cosine";
    case MeasureKind::Canberra: return "canberra";
    case MeasureKind::Tanimoto: return "tanimoto";
    case MeasureKind::PinvEnergy: return "pinv";
  }
  return "unknown";
}

std::optional<MeasureKind> parse_measure(std::string_view name) noexcept {
  for (auto k : {MeasureKind::L1, MeasureKind::L2, MeasureKind::Linf, MeasureKind::Cosine,
                 MeasureKind::Canberra, MeasureKind::Tanimoto, MeasureKind::PinvEnergy}) {
    if (to_string(k) == name) return k;
  }
  if (name == "pinv-energy") return MeasureKind::PinvEnergy;
  return std::nullopt;
}

std::optional<double> try_pinv_energy(std::span<const double> u, std::span<const double> v) noexcept {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (!(uu > 0.0) || !(vv > 0.0)) return std::nullopt;
  // u pinv(v) + v pinv(u); kept as two quotients so that v = 2u gives 2.5 exactly.
  return uv / vv + uv / uu;
}

double pinv_energy(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  const auto e = try_pinv_energy(u, v);
  if (!e) throw Error(ErrorKind::ZeroVector, "pinv of a zero vector is undefined");
  return *e;
}

double dist(std::span<const double> u, std::span<const double> v, MeasureKind kind) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  const std::size_t n = u.size();
  switch (kind) {
    case MeasureKind::L1: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(u[i] - v[i]);
      return acc;
    }
    case MeasureKind::L2: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = u[i] - v[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case MeasureKind::Linf: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(u[i] - v[i]));
      return acc;
    }
    case MeasureKind::Cosine: {
      double uv = 0.0, uu = 0.0, vv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
      }
      if (uu == 0.0 || vv == 0.0) return 0.0;
      // Clamp rounding excursions past the exact range [0, 2].
      return std::clamp(1.0 - uv / (std::sqrt(uu) * std::sqrt(vv)), 0.0, 2.0);
    }
    case MeasureKind::Canberra: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double den = std::abs(u[i]) + std::abs(v[i]);
        if (den > 0.0) acc += std::abs(u[i] - v[i]) / den;
      }
      return acc;
    }
    case MeasureKind::Tanimoto: {
      double uv = 0.0, uu = 0.0, vv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
      }
      const double den = uu + vv - uv;
      if (den <= 0.0) return 0.0;
      return std::max(0.0, 1.0 - uv / den);
    }
    case MeasureKind::PinvEnergy:
      return pinv_energy(u, v);
  }
  return 0.0;
}

}  // namespace mhfseg
