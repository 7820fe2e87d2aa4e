#pragma once

// Private JSON helpers shared by the population, model and snapshot writers.

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "nre/core/latent.hpp"
#include "nre/datagen/gmm.hpp"
#include "nre/error.hpp"

namespace nre::detail {

using Json = nlohmann::json;

inline Json to_json(const LatentVector& v) { return Json(v.values()); }

inline LatentVector latent_from_json(const Json& j) { return LatentVector(j.get<std::vector<double>>()); }

inline Json gmm_to_json(const datagen::GmmModel& model) {
    Json means = Json::array();
    Json vars = Json::array();
    for (std::size_t t = 0; t < model.components(); ++t) {
        means.push_back(to_json(model.means[t]));
        vars.push_back(to_json(model.variances[t]));
    }
    return Json{{"weights", model.weights}, {"means", means}, {"variances", vars}};
}

inline datagen::GmmModel gmm_from_json(const Json& j) {
    datagen::GmmModel model;
    model.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& m : j.at("means")) model.means.push_back(latent_from_json(m));
    for (const auto& v : j.at("variances")) model.variances.push_back(latent_from_json(v));
    model.validate();
    return model;
}

/// Writes to a sibling temporary file and renames, so readers never observe
/// a half-written document.
inline void write_json_atomically(const std::filesystem::path& path, const Json& doc) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << doc.dump(1) << '\n';
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// Parses a whole JSON file; a truncated or malformed document raises FormatError.
inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

/// Checks the "format" and "version" header; throws FormatError on mismatch.
inline void expect_header(const Json& doc, const std::string& format, int version) {
    if (!doc.is_object() || !doc.contains("format") || doc.at("format") != format) {
        throw FormatError("not a " + format + " document");
    }
    const int found = doc.value("version", -1);
    if (found != version) {
        throw FormatError(format + " version " + std::to_string(found) + " is not supported (expected " +
                          std::to_string(version) + ")");
    }
}

}  // namespace nre::detail
