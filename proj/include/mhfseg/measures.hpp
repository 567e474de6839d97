#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace mhfseg {

/// Dissimilarities used as the error(.,.) between context averages.
/// PinvEnergy is reserved for the energy-change detector.
enum class MeasureKind { L1, L2, Linf, Cosine, Canberra, Tanimoto, PinvEnergy };

inline constexpr MeasureKind kDefaultMeasure = MeasureKind::L2;

std::string_view to_string(MeasureKind kind) noexcept;
std::optional<MeasureKind> parse_measure(std::string_view name) noexcept;

/// l1, l2, linf: norms of u - v.
/// cosine: 1 - u.v / (|u| |v|), 0 if either norm is zero.
/// canberra: sum |u_i - v_i| / (|u_i| + |v_i|), zero-denominator terms add 0.
/// tanimoto: 1 - u.v / (|u|^2 + |v|^2 - u.v), 0 if both vectors are zero.
/// pinv-energy: see pinv_energy().
/// Throws LengthMismatch if the sizes differ or are zero.
double dist(std::span<const double> u, std::span<const double> v, MeasureKind kind);

/// E(u, v) = u pinv(v) + v pinv(u) with pinv(v) = v^T / (v.v), the vector form
/// of a/b + b/a. Equals 2 when u == v and c + 1/c when v == c u.
/// Throws ZeroVector if either vector is all zero.
double pinv_energy(std::span<const double> u, std::span<const double> v);

/// Non-throwing variant; nullopt when either vector is all zero.
std::optional<double> try_pinv_energy(std::span<const double> u, std::span<const double> v) noexcept;

}  // namespace mhfseg
