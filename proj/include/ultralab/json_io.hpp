#pragma once

/**
 * @file json_io.hpp
 * @brief Document schemas: spaces, ball spaces, maps, ball maps, scalar
 *        functions and measures, all versioned "ultrametric-lab/1".
 *
 * Rationals serialize as "num/den" strings ("k" for integers), so every
 * document round-trips bit-exactly. Map documents reference their spaces
 * by path, resolved relative to the referencing file.
 */

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "ultralab/ball_map.hpp"
#include "ultralab/ball_space.hpp"
#include "ultralab/measures.hpp"

namespace ultralab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ultrametric-lab/1";

struct DocumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace io_detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DocumentError("document: " + msg);
}

inline void check_schema(const Json& j) {
    require(j.is_object(), "expected a JSON object");
    if (j.contains("schema"))
        require(j["schema"] == kSchema,
                "unsupported schema (expected " + std::string(kSchema) + ")");
}

inline Rational rat(const Json& j) {
    require(j.is_string(), "rationals must be \"num/den\" strings");
    return Rational::parse(j.get<std::string>());
}

} // namespace io_detail

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DocumentError("document: cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DocumentError("document: " + path + " is not valid JSON: " + e.what());
    }
    return j;
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw DocumentError("document: cannot write " + path);
    out << j.dump(2) << "\n";
}

/// Path of `ref` relative to the file that mentioned it.
inline std::string resolve_ref(const std::string& referencing_file, const std::string& ref) {
    std::filesystem::path p(ref);
    if (p.is_absolute()) return ref;
    return (std::filesystem::path(referencing_file).parent_path() / p).string();
}

// ---- spaces ----

inline Json space_to_json(const UltraSpace& sp) {
    Json j;
    j["schema"] = kSchema;
    switch (sp.model()) {
        case SpaceModel::PQuotient:
            j["model"] = "pquotient";
            j["p"] = sp.prime();
            j["n"] = sp.level();
            break;
        case SpaceModel::CpChain: {
            j["model"] = "cpchain";
            j["p"] = sp.prime();
            Json radii = Json::array();
            for (const auto& r : sp.chain_radii()) radii.push_back(r.str());
            j["radii"] = std::move(radii);
            break;
        }
        case SpaceModel::Explicit: {
            j["model"] = "explicit";
            j["points"] = sp.labels();
            Json matrix = Json::array();
            for (std::size_t i = 0; i < sp.size(); ++i) {
                Json row = Json::array();
                for (std::size_t k = 0; k < sp.size(); ++k) row.push_back(sp.dist(i, k).str());
                matrix.push_back(std::move(row));
            }
            j["matrix"] = std::move(matrix);
            break;
        }
    }
    if (!sp.include_singleton_balls()) j["include_singleton_balls"] = false;
    return j;
}

inline UltraSpace space_from_json(const Json& j) {
    io_detail::check_schema(j);
    io_detail::require(j.contains("model") && j["model"].is_string(), "space needs a model");
    bool singletons = true;
    if (j.contains("include_singleton_balls")) {
        io_detail::require(j["include_singleton_balls"].is_boolean(),
                           "include_singleton_balls must be a boolean");
        singletons = j["include_singleton_balls"].get<bool>();
    }
    std::string model = j["model"];
    if (model == "pquotient") {
        io_detail::require(j.contains("p") && j["p"].is_number_integer(), "pquotient needs p");
        io_detail::require(j.contains("n") && j["n"].is_number_integer(), "pquotient needs n");
        return UltraSpace::make_pquotient(j["p"].get<long long>(), j["n"].get<long long>(),
                                          singletons);
    }
    if (model == "cpchain") {
        io_detail::require(j.contains("p") && j["p"].is_number_integer(), "cpchain needs p");
        io_detail::require(j.contains("radii") && j["radii"].is_array(), "cpchain needs radii");
        std::vector<Rational> radii;
        for (const auto& r : j["radii"]) radii.push_back(io_detail::rat(r));
        return UltraSpace::make_cpchain(j["p"].get<long long>(), std::move(radii), singletons);
    }
    if (model == "explicit") {
        io_detail::require(j.contains("points") && j["points"].is_array(), "explicit needs points");
        io_detail::require(j.contains("matrix") && j["matrix"].is_array(), "explicit needs a matrix");
        std::vector<std::string> labels;
        for (const auto& l : j["points"]) {
            io_detail::require(l.is_string(), "point labels must be strings");
            labels.push_back(l.get<std::string>());
        }
        std::vector<std::vector<Rational>> matrix;
        for (const auto& row : j["matrix"]) {
            io_detail::require(row.is_array(), "matrix rows must be arrays");
            std::vector<Rational> r;
            for (const auto& cell : row) r.push_back(io_detail::rat(cell));
            matrix.push_back(std::move(r));
        }
        return UltraSpace::make_explicit(std::move(labels), matrix, singletons);
    }
    throw DocumentError("document: unknown space model '" + model + "'");
}

inline SpacePtr load_space(const std::string& path) {
    return std::make_shared<const UltraSpace>(space_from_json(load_json(path)));
}

// ---- ball spaces ----

inline Json ball_space_to_json(const BallSpace& bs) {
    Json j;
    j["schema"] = kSchema;
    j["space"] = space_to_json(bs.base());
    j["variant"] = bs.variant() == BallVariant::MFlat ? "m_flat" : "m_flat_bar";
    Json balls = Json::array();
    for (const auto& b : bs.balls()) {
        Json members = Json::array();
        for (auto x : b.members) members.push_back(x);
        balls.push_back(std::move(members));
    }
    j["balls"] = std::move(balls);
    return j;
}

inline BallSpacePtr ball_space_from_json(const Json& j) {
    io_detail::check_schema(j);
    io_detail::require(j.contains("space"), "ball space needs its base space");
    io_detail::require(j.contains("variant") && j["variant"].is_string(),
                       "ball space needs a variant");
    std::string variant = j["variant"];
    io_detail::require(variant == "m_flat" || variant == "m_flat_bar", "unknown variant");
    auto base = std::make_shared<const UltraSpace>(space_from_json(j["space"]));
    auto bs = enumerate_balls(base,
                              variant == "m_flat" ? BallVariant::MFlat : BallVariant::MFlatBar);
    if (j.contains("balls")) {
        io_detail::require(j["balls"].is_array(), "ball list must be an array");
        io_detail::require(j["balls"].size() == bs->size(),
                           "stored ball list does not match the enumeration");
        for (std::size_t i = 0; i < bs->size(); ++i) {
            PointSet stored;
            for (const auto& x : j["balls"][i]) stored.push_back(x.get<std::uint32_t>());
            io_detail::require(stored == bs->ball_at(i).members,
                               "stored ball list does not match the enumeration");
        }
    }
    return bs;
}

inline BallSpacePtr load_ball_space(const std::string& path) {
    return ball_space_from_json(load_json(path));
}

// ---- maps ----

namespace io_detail {

/// Tables are JSON objects keyed by the domain index as a decimal string.
inline std::vector<std::string> table_entries(const Json& j, std::size_t domain_size) {
    require(j.is_object(), "table must be an object keyed by domain index");
    require(j.size() == domain_size, "table is not total on the domain");
    std::vector<std::string> out(domain_size);
    for (const auto& [key, value] : j.items()) {
        std::size_t idx = 0;
        try {
            idx = std::stoul(key);
        } catch (...) {
            throw DocumentError("document: bad table key '" + key + "'");
        }
        require(idx < domain_size, "table key out of range: " + key);
        require(value.is_string(), "table values must be strings");
        out[idx] = value.get<std::string>();
    }
    return out;
}

inline std::uint32_t parse_point(const UltraSpace& sp, const std::string& s) {
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(s, &pos);
        if (pos == s.size() && v < sp.size()) return static_cast<std::uint32_t>(v);
    } catch (...) {
    }
    return static_cast<std::uint32_t>(sp.point_by_label(s));
}

} // namespace io_detail

inline Json point_map_to_json(const PointMap& f, const std::string& domain_ref,
                              const std::string& codomain_ref) {
    Json j;
    j["schema"] = kSchema;
    j["domain"] = domain_ref;
    j["codomain"] = codomain_ref;
    Json table = Json::object();
    for (std::size_t i = 0; i < f.table.size(); ++i)
        table[std::to_string(i)] = std::to_string(f.table[i]);
    j["table"] = std::move(table);
    return j;
}

inline PointMap load_point_map(const std::string& path) {
    Json j = load_json(path);
    io_detail::check_schema(j);
    io_detail::require(j.contains("domain") && j["domain"].is_string(), "map needs a domain path");
    io_detail::require(j.contains("codomain") && j["codomain"].is_string(),
                       "map needs a codomain path");
    io_detail::require(j.contains("table"), "map needs a table");
    SpacePtr dom = load_space(resolve_ref(path, j["domain"]));
    SpacePtr cod = load_space(resolve_ref(path, j["codomain"]));
    auto entries = io_detail::table_entries(j["table"], dom->size());
    std::vector<std::uint32_t> table;
    for (const auto& e : entries) table.push_back(io_detail::parse_point(*cod, e));
    return {dom, PointCodomain{cod}, std::move(table)};
}

inline Json scalar_function_to_json(const ScalarFunction& f, const std::string& domain_ref) {
    Json j;
    j["schema"] = kSchema;
    j["domain"] = domain_ref;
    j["p"] = f.codomain.abs.prime();
    Json values = Json::object();
    for (std::size_t i = 0; i < f.table.size(); ++i) values[std::to_string(i)] = f.table[i].str();
    j["values"] = std::move(values);
    return j;
}

inline ScalarFunction load_scalar_function(const std::string& path) {
    Json j = load_json(path);
    io_detail::check_schema(j);
    io_detail::require(j.contains("domain") && j["domain"].is_string(),
                       "scalar function needs a domain path");
    io_detail::require(j.contains("p") && j["p"].is_number_integer(),
                       "scalar function needs its prime");
    io_detail::require(j.contains("values"), "scalar function needs values");
    SpacePtr dom = load_space(resolve_ref(path, j["domain"]));
    auto entries = io_detail::table_entries(j["values"], dom->size());
    std::vector<Rational> table;
    for (const auto& e : entries) table.push_back(Rational::parse(e));
    return {dom, ScalarCodomain{PAdicAbs(j["p"].get<long long>())}, std::move(table)};
}

/// Ball-map documents: {"ball_domain": path, "codomain": path, ...} for a
/// point codomain, {"ball_domain": path, "p": prime, ...} for a scalar one.
inline Json scalar_ball_map_to_json(const ScalarBallMap& m, const std::string& domain_ref) {
    Json j;
    j["schema"] = kSchema;
    j["ball_domain"] = domain_ref;
    j["p"] = m.codomain.abs.prime();
    Json table = Json::object();
    for (std::size_t i = 0; i < m.table.size(); ++i) table[std::to_string(i)] = m.table[i].str();
    j["table"] = std::move(table);
    return j;
}

inline Json point_ball_map_to_json(const PointBallMap& m, const std::string& domain_ref,
                                   const std::string& codomain_ref) {
    Json j;
    j["schema"] = kSchema;
    j["ball_domain"] = domain_ref;
    j["codomain"] = codomain_ref;
    Json table = Json::object();
    for (std::size_t i = 0; i < m.table.size(); ++i)
        table[std::to_string(i)] = std::to_string(m.table[i]);
    j["table"] = std::move(table);
    return j;
}

inline bool ball_map_is_scalar(const std::string& path) {
    Json j = load_json(path);
    return j.contains("p");
}

inline ScalarBallMap load_scalar_ball_map(const std::string& path) {
    Json j = load_json(path);
    io_detail::check_schema(j);
    io_detail::require(j.contains("ball_domain") && j["ball_domain"].is_string(),
                       "ball map needs a ball_domain path");
    io_detail::require(j.contains("p") && j["p"].is_number_integer(),
                       "scalar ball map needs its prime");
    io_detail::require(j.contains("table"), "ball map needs a table");
    BallSpacePtr dom = load_ball_space(resolve_ref(path, j["ball_domain"]));
    auto entries = io_detail::table_entries(j["table"], dom->size());
    std::vector<Rational> table;
    for (const auto& e : entries) table.push_back(Rational::parse(e));
    return {dom, ScalarCodomain{PAdicAbs(j["p"].get<long long>())}, std::move(table)};
}

inline PointBallMap load_point_ball_map(const std::string& path) {
    Json j = load_json(path);
    io_detail::check_schema(j);
    io_detail::require(j.contains("ball_domain") && j["ball_domain"].is_string(),
                       "ball map needs a ball_domain path");
    io_detail::require(j.contains("codomain") && j["codomain"].is_string(),
                       "point ball map needs a codomain path");
    io_detail::require(j.contains("table"), "ball map needs a table");
    BallSpacePtr dom = load_ball_space(resolve_ref(path, j["ball_domain"]));
    SpacePtr cod = load_space(resolve_ref(path, j["codomain"]));
    auto entries = io_detail::table_entries(j["table"], dom->size());
    std::vector<std::uint32_t> table;
    for (const auto& e : entries) table.push_back(io_detail::parse_point(*cod, e));
    return {dom, PointCodomain{cod}, std::move(table)};
}

// ---- measures ----

inline Json measure_to_json(const LevelMeasure& mu) {
    Json j;
    j["schema"] = kSchema;
    j["p"] = mu.prime();
    j["level"] = mu.level();
    Json atoms = Json::object();
    for (std::size_t i = 0; i < mu.atoms().size(); ++i)
        atoms[std::to_string(i)] = mu.atoms()[i].str();
    j["atoms"] = std::move(atoms);
    if (mu.kind() == MeasureKind::Distribution) j["kind"] = "distribution";
    return j;
}

inline LevelMeasure measure_from_json(const Json& j) {
    io_detail::check_schema(j);
    io_detail::require(j.contains("p") && j["p"].is_number_integer(), "measure needs p");
    io_detail::require(j.contains("level") && j["level"].is_number_integer(),
                       "measure needs a level");
    io_detail::require(j.contains("atoms"), "measure needs atoms");
    long long p = j["p"].get<long long>();
    long long level = j["level"].get<long long>();
    long long count = 1;
    for (long long i = 0; i < level; ++i) count *= p;
    auto entries = io_detail::table_entries(j["atoms"], static_cast<std::size_t>(count));
    std::vector<Rational> atoms;
    for (const auto& e : entries) atoms.push_back(Rational::parse(e));
    MeasureKind kind = MeasureKind::Measure;
    if (j.contains("kind") && j["kind"] == "distribution") kind = MeasureKind::Distribution;
    return {p, level, std::move(atoms), kind};
}

inline LevelMeasure load_measure(const std::string& path) {
    return measure_from_json(load_json(path));
}

} // namespace ultralab
