#pragma once

#include "hessblow/diagnostics.hpp"
#include "hessblow/expected.hpp"
#include "hessblow/families.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace hessblow {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---------------------------------------------------------------------------
// Family documents
// ---------------------------------------------------------------------------

inline Json to_json(const SolutionFamily& family) {
    Json params = Json::object();
    for (const auto& [name, value] : parameters(family)) params[name] = value.str();
    return Json{{"family", family_name(family)}, {"params", params}};
}

namespace detail {

inline Expected<Rational> rational_from_json(const Json& v, const std::string& name) {
    if (v.is_string()) {
        auto r = Rational::parse(v.get<std::string>());
        if (!r) return fail(ErrorKind::Parameter, "parameter " + name + " is not a rational: " + v.dump());
        return *r;
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) {
        // The shortest round-trip decimal is the value the document author wrote.
        auto r = Rational::parse(v.dump());
        if (!r) return fail(ErrorKind::Parameter, "parameter " + name + " is not a rational: " + v.dump());
        return *r;
    }
    return fail(ErrorKind::Parameter, "parameter " + name + " must be a string or a number");
}

}  // namespace detail

/// Parses {"family": name, "params": {...}}. All of the family's parameters must be present and
/// no others; the result is validated.
inline Expected<SolutionFamily> family_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("family") || !doc["family"].is_string())
        return fail(ErrorKind::Parameter, "family document needs a string field \"family\"");
    auto kind = family_kind_from_name(doc["family"].get<std::string>());
    if (!kind) return fail(ErrorKind::Parameter, "unknown family '" + doc["family"].get<std::string>() + "'");
    const Json params = doc.contains("params") ? doc["params"] : Json::object();
    if (!params.is_object()) return fail(ErrorKind::Parameter, "\"params\" must be an object");

    const auto names = parameters(make_family(*kind, {}));
    std::vector<Rational> values;
    for (const auto& [name, unused] : names) {
        if (!params.contains(name)) return fail(ErrorKind::Parameter, "missing parameter " + name);
        auto r = detail::rational_from_json(params[name], name);
        if (!r) return unexpected(r.error());
        values.push_back(*r);
    }
    for (const auto& [key, unused] : params.items()) {
        bool known = false;
        for (const auto& [name, u2] : names) known = known || name == key;
        if (!known) return fail(ErrorKind::Parameter, "unexpected parameter " + key + " for " + family_name(*kind));
    }
    SolutionFamily family = make_family(*kind, values);
    if (auto err = validate(family)) return unexpected(*err);
    return family;
}

inline Expected<SolutionFamily> family_from_json_text(const std::string& text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) return fail(ErrorKind::Parse, "family document is not valid JSON");
    return family_from_json(doc);
}

/// Representative parameters used when a family is named without a document.
inline SolutionFamily default_family(FamilyKind kind) {
    auto r = [](long long n) { return Rational(n); };
    switch (kind) {
        case FamilyKind::Square: return SquareFamily{r(1)};
        case FamilyKind::Disc: return DiscFamily{r(1)};
        case FamilyKind::QuarticPlane: return QuarticPlaneFamily{r(1), r(0), r(1), r(1), r(0), r(0), r(0)};
        case FamilyKind::RadialPlane: return RadialPlaneFamily{r(1), r(1), r(0)};
        case FamilyKind::ExpPlane: return ExpPlaneFamily{r(1), r(1), r(1), r(1), r(0), r(0), r(0)};
    }
    return SquareFamily{r(1)};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json to_json(const IdentityCheck& id) {
    return Json{{"name", id.name}, {"holds", id.holds}, {"residual", to_text(id.residual)}};
}

inline Json to_json(const BlowUpClass& cls) {
    Json j{{"kind", to_string(cls.kind)}};
    j["t_star"] = cls.t_star ? Json(cls.t_star->str()) : Json(nullptr);
    j["notes"] = cls.notes;
    return j;
}

inline Json optional_rational(const std::optional<Rational>& r) { return r ? Json(r->str()) : Json(nullptr); }

inline Json to_json(const Expected<StructureDecomposition, VerificationFailure>& result) {
    Json j;
    Json ids = Json::array();
    if (result) {
        j["verified"] = true;
        j["alpha"] = optional_rational(result->alpha);
        j["beta"] = optional_rational(result->beta);
        j["gamma"] = optional_rational(result->gamma);
        j["P"] = to_text(result->P);
        for (const auto& id : result->identities) ids.push_back(to_json(id));
    } else {
        j["verified"] = false;
        j["failed"] = result.error().which;
        j["residual"] = to_text(result.error().residual);
        for (const auto& id : result.error().identities) ids.push_back(to_json(id));
    }
    j["identities"] = ids;
    return j;
}

inline Json to_json(const GronwallReport& rep) {
    Json margins = Json::array();
    for (const auto& m : rep.margin_series) margins.push_back(Json{{"t", m.t}, {"lhs", m.lhs}, {"rhs", m.rhs}});
    return Json{{"c_fit", rep.c_fit},
                {"integral_form_ratio", rep.integral_form_ratio},
                {"grad_integral", rep.grad_integral},
                {"margin_series", margins}};
}

inline Json to_json(const Expected<BlowUpFit>& fit, FitChannel channel) {
    Json j{{"channel", to_string(channel)}};
    if (fit) {
        j["status"] = "ok";
        j["t_star_est"] = fit->t_star_est;
        j["residual"] = fit->residual;
        j["slope"] = fit->slope;
        j["intercept"] = fit->intercept;
    } else {
        j["status"] = to_string(fit.error().kind);
        j["message"] = fit.error().message;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

/// First line of every CSV output; JSON outputs carry the same text under the key "#".
inline std::string provenance(const std::string& digest) {
    return std::string("hessblow ") + kVersion + " runspec=" + digest;
}

/// Writes through a sibling temporary file and renames it into place.
inline Expected<std::monostate> write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return fail(ErrorKind::Io, "cannot open " + tmp.string());
        out << content;
        if (!out.flush()) return fail(ErrorKind::Io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) return fail(ErrorKind::Io, "rename to " + path.string() + " failed: " + ec.message());
    return std::monostate{};
}

inline Expected<std::monostate> write_csv(const std::filesystem::path& path, const std::string& digest,
                                          const std::string& body) {
    return write_atomic(path, "# " + provenance(digest) + "\n" + body);
}

inline Expected<std::monostate> write_json(const std::filesystem::path& path, const std::string& digest, Json body) {
    Json doc{{"#", provenance(digest)}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    return write_atomic(path, doc.dump(2) + "\n");
}

inline Expected<std::string> read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hessblow
