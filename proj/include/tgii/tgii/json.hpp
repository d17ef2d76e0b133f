#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tgii/tgii/tgii.hpp"

namespace tgii::core {

using Json = nlohmann::json;

inline constexpr const char* format_tag = "tgii/1";

// Canonical text: sorted keys, two-space indent, trailing LF.
std::string dump(const Json& j);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

// Every document carries format, kind and demo_only; parsers check format
// and kind and throw ParseError otherwise.
Json document(const std::string& kind);
void expect_kind(const Json& j, const std::string& kind);

Json integer_json(const Integer& n);
Integer integer_from(const Json& j);

Json to_json(const IdealClass& c);
IdealClass class_from_json(const Json& j);

Json to_json(const PublicParams& pp);
PublicParams public_params_from_json(const Json& j);

Json to_json(const PrimeRegistry& r);
PrimeRegistry registry_from_json(const Json& j);

// Class tables are rebuilt on load from (p, q, D, base j's).
Json to_json(const Trapdoor& td);
Trapdoor trapdoor_from_json(const Json& j);

Json to_json(const ComposableEncoding& e);
ComposableEncoding encoding_from_json(const Json& j);

Json to_json(const Ladder& l);
Ladder ladder_from_json(const Json& j);

}  // namespace tgii::core
