#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include "qlab/common/textio.hpp"
#include "qlab/envs/benchmarks.hpp"
#include "qlab/envs/mdp.hpp"
#include "qlab/train/config.hpp"

using namespace qlab::envs;
namespace fs = std::filesystem;

namespace {

const fs::path kRepo = QLAB_REPO_DIR;

// Field-by-field equality; exact double comparison is intended, the files are
// generated from the builders and JSON round-trips doubles losslessly.
void check_same(const Mdp& a, const Mdp& b) {
    CHECK(a.states == b.states);
    CHECK(a.n_actions == b.n_actions);
    CHECK(a.kernel == b.kernel);
    CHECK(a.reward == b.reward);
    CHECK(a.discount == b.discount);
    CHECK(a.initial_dist == b.initial_dist);
}

}  // namespace

TEST_CASE("shipped benchmark files match the builders") {
    check_same(load_mdp((kRepo / "bench/chain.json").string()), chain_mdp());
    check_same(load_mdp((kRepo / "bench/trap.json").string()), trap_mdp());
    check_same(load_mdp((kRepo / "bench/reducible_0.json").string()), reducible_mdp(0));
    check_same(load_mdp((kRepo / "bench/reducible_1.json").string()), reducible_mdp(1));
}

TEST_CASE("shipped benchmark files are byte-fresh") {
    for (const char* name :
         {"bench/chain.json", "bench/trap.json", "bench/reducible_0.json",
          "bench/reducible_1.json"}) {
        CAPTURE(name);
        const std::string path = (kRepo / name).string();
        CHECK(mdp_to_json_text(load_mdp(path)) == qlab::read_text_file(path));
    }
}

TEST_CASE("shipped run configs load and point at real environments") {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(kRepo / "configs")) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        const auto cfg = qlab::train::load_config(entry.path().string());
        CHECK(fs::exists(cfg.resolved_env_path));
        // Settings must validate against the environment they name.
        const Mdp mdp = load_mdp(cfg.resolved_env_path);
        CHECK_NOTHROW(cfg.settings_for(mdp).validate(mdp));
        ++seen;
    }
    CHECK(seen == 7);
}
