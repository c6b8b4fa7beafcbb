#pragma once

#include <string>
#include <vector>

#include "specanom/cli.hpp"
#include "specanom/flow.hpp"

namespace specanom::cli::detail {

/// A model reference is a declared name or an inline descriptor.
Spectrum resolve_model(const TaskConfig& config, const nlohmann::json& ref);

/// {"kind": "identity" | "power" | "log" | "sign", "of"?: model, "r"?: number};
/// "of" defaults to `fallback`.
Multiplier multiplier_from_json(const TaskConfig& config, const nlohmann::json& j, const Spectrum& fallback);

/// Rational-looking numbers as "p/q" strings or plain numbers.
double number_from_json(const nlohmann::json& j);

void reject_unknown(const nlohmann::json& j, const std::vector<std::string>& allowed, const std::string& where);

}  // namespace specanom::cli::detail
