#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace lorenz {

/// The four empirical-likelihood calibrations.
enum class VariantKind { EL, AEL, TEL, TAEL };

inline constexpr std::array<VariantKind, 4> kAllVariants{
    VariantKind::EL, VariantKind::AEL, VariantKind::TEL, VariantKind::TAEL};

constexpr std::string_view to_string(VariantKind kind) noexcept {
    switch (kind) {
        case VariantKind::EL: return "EL";
        case VariantKind::AEL: return "AEL";
        case VariantKind::TEL: return "TEL";
        case VariantKind::TAEL: return "TAEL";
    }
    return "?";
}

/// Case-insensitive parse of "el", "ael", "tel", "tael".
std::optional<VariantKind> parse_variant(std::string_view name);

/// True for the variants that append the adjustment pseudo-observation.
constexpr bool is_adjusted(VariantKind kind) noexcept {
    return kind == VariantKind::AEL || kind == VariantKind::TAEL;
}

constexpr bool is_transformed(VariantKind kind) noexcept {
    return kind == VariantKind::TEL || kind == VariantKind::TAEL;
}

}  // namespace lorenz
