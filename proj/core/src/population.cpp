#include "nre/datagen/population.hpp"

#include "json_io.hpp"
#include "nre/core/sampling.hpp"

namespace nre::datagen {
namespace {

constexpr const char* kPopulationFormat = "nresim-population";
constexpr int kPopulationVersion = 1;

}  // namespace

SyntheticPopulation sample_population(const GmmModel& users, const GmmModel& creators, std::size_t user_count,
                                      std::size_t creator_count, const HyperConfig& hyper, RngStream& rng) {
    users.validate();
    creators.validate();
    if (users.dimension() != creators.dimension()) throw FormatError("user and creator models differ in dimension");

    SyntheticPopulation pop;
    pop.user_model = users;
    pop.creator_model = creators;
    pop.users.reserve(user_count);
    const RngStream user_root = rng.derive("users");
    for (std::size_t i = 0; i < user_count; ++i) {
        RngStream r = user_root.derive(i);
        auto draw = sample_gmm(users, r);
        SyntheticUser u;
        u.latent = std::move(draw.latent);
        u.component = draw.component;
        u.threshold = sample_clipped_gaussian(hyper.threshold.mean, hyper.threshold.std, 0.0, kInfinity, r);
        u.alpha = sample_clipped_gaussian(hyper.alpha.mean, hyper.alpha.std, 0.0, kInfinity, r);
        u.concentration = sample_clipped_gaussian(hyper.user_concentration.mean, hyper.user_concentration.std, 0.0,
                                                  kInfinity, r);
        pop.users.push_back(std::move(u));
    }
    pop.creators.reserve(creator_count);
    const RngStream creator_root = rng.derive("creators");
    for (std::size_t i = 0; i < creator_count; ++i) {
        RngStream r = creator_root.derive(i);
        auto draw = sample_gmm(creators, r);
        SyntheticCreator c;
        c.latent = std::move(draw.latent);
        c.component = draw.component;
        c.concentration = sample_clipped_gaussian(hyper.creator_concentration.mean, hyper.creator_concentration.std,
                                                  0.0, 1.0, r);
        pop.creators.push_back(std::move(c));
    }
    return pop;
}

void save_population(const std::filesystem::path& path, const SyntheticPopulation& population) {
    using detail::Json;
    Json users = Json::array();
    for (const auto& u : population.users) {
        users.push_back({{"latent", detail::to_json(u.latent)},
                         {"threshold", u.threshold},
                         {"alpha", u.alpha},
                         {"concentration", u.concentration},
                         {"component", u.component}});
    }
    Json creators = Json::array();
    for (const auto& c : population.creators) {
        creators.push_back(
            {{"latent", detail::to_json(c.latent)}, {"concentration", c.concentration}, {"component", c.component}});
    }
    Json doc{{"format", kPopulationFormat},
             {"version", kPopulationVersion},
             {"dimension", population.dimension()},
             {"user_model", detail::gmm_to_json(population.user_model)},
             {"creator_model", detail::gmm_to_json(population.creator_model)},
             {"users", users},
             {"creators", creators}};
    detail::write_json_atomically(path, doc);
}

SyntheticPopulation load_population(const std::filesystem::path& path) {
    const auto doc = detail::read_json_file(path);
    detail::expect_header(doc, kPopulationFormat, kPopulationVersion);
    SyntheticPopulation pop;
    try {
        pop.user_model = detail::gmm_from_json(doc.at("user_model"));
        pop.creator_model = detail::gmm_from_json(doc.at("creator_model"));
        const std::size_t dim = doc.at("dimension").get<std::size_t>();
        for (const auto& j : doc.at("users")) {
            SyntheticUser u;
            u.latent = detail::latent_from_json(j.at("latent"));
            u.threshold = j.at("threshold").get<double>();
            u.alpha = j.at("alpha").get<double>();
            u.concentration = j.at("concentration").get<double>();
            u.component = j.at("component").get<std::size_t>();
            if (u.latent.size() != dim || !u.latent.all_finite()) throw FormatError("bad user latent");
            if (u.threshold < 0.0 || u.alpha < 0.0 || u.concentration < 0.0) throw FormatError("bad user parameter");
            pop.users.push_back(std::move(u));
        }
        for (const auto& j : doc.at("creators")) {
            SyntheticCreator c;
            c.latent = detail::latent_from_json(j.at("latent"));
            c.concentration = j.at("concentration").get<double>();
            c.component = j.at("component").get<std::size_t>();
            if (c.latent.size() != dim || !c.latent.all_finite()) throw FormatError("bad creator latent");
            if (c.concentration < 0.0 || c.concentration > 1.0) throw FormatError("bad creator concentration");
            pop.creators.push_back(std::move(c));
        }
    } catch (const detail::Json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return pop;
}

}  // namespace nre::datagen
