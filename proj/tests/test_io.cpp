#include "doctest.h"

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "spatialsim/checkpoint.hpp"
#include "spatialsim/datagen.hpp"
#include "spatialsim/dataset_io.hpp"
#include "spatialsim/models.hpp"
#include "spatialsim/optim.hpp"

using namespace spatialsim;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / ("spatialsim_test_" + stem);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

bool same_config(const Configuration& a, const Configuration& b) {
    // exact equality: the format must not lose precision
    return a.objects == b.objects;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips awkward values") {
    for (double v : {1.0 / 3.0, 1e-300, -0.0, 12345.678901234567, 2e17,
                     0.1 + 0.2, 6.02e23, -1.7976931348623157e308}) {
        const double back = std::stod(format_double(v));
        CHECK(back == v);
    }
}

TEST_CASE("identification dataset round-trips bitwise") {
    GenConfig cfg;
    cfg.n_train = 16;
    cfg.n_eval = 8;
    cfg.seed = 99;
    IdentificationBundle bundle = gen_identification(5, cfg);

    const auto path = temp_file("ident_ds");
    write_dataset(path.string(), bundle.train);
    Dataset back = read_dataset(path.string());

    CHECK(back.meta.task == TaskKind::identification);
    CHECK(back.meta.n_min == bundle.train.meta.n_min);
    CHECK(back.meta.n_max == bundle.train.meta.n_max);
    CHECK(back.meta.theta_max == bundle.train.meta.theta_max);
    CHECK(back.meta.eps == bundle.train.meta.eps);
    CHECK(back.meta.seed == bundle.train.meta.seed);
    REQUIRE(back.size() == bundle.train.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.samples[i].label == bundle.train.samples[i].label);
        CHECK(same_config(back.samples[i].first, bundle.train.samples[i].first));
        CHECK(back.samples[i].second.objects.empty());
    }
    std::filesystem::remove(path);
}

TEST_CASE("comparison dataset round-trips bitwise") {
    GenConfig cfg;
    cfg.n_train = 8;
    cfg.n_eval = 8;
    cfg.seed = 7;
    Dataset ds = gen_comparison_test(3, 8, cfg);

    const auto path = temp_file("comp_ds");
    write_dataset(path.string(), ds);
    Dataset back = read_dataset(path.string());

    CHECK(back.meta.task == TaskKind::comparison);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.samples[i].label == ds.samples[i].label);
        CHECK(same_config(back.samples[i].first, ds.samples[i].first));
        CHECK(same_config(back.samples[i].second, ds.samples[i].second));
    }
    std::filesystem::remove(path);
}

TEST_CASE("writes are byte-identical across calls") {
    GenConfig cfg;
    cfg.n_train = 8;
    cfg.n_eval = 8;
    cfg.seed = 3;
    IdentificationBundle bundle = gen_identification(6, cfg);

    const auto p1 = temp_file("rep1"), p2 = temp_file("rep2");
    write_dataset(p1.string(), bundle.valid);
    write_dataset(p2.string(), bundle.valid);
    CHECK(slurp(p1) == slurp(p2));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("reader reports the offending line") {
    GenConfig cfg;
    cfg.n_train = 4;
    cfg.n_eval = 4;
    cfg.seed = 1;
    IdentificationBundle bundle = gen_identification(5, cfg);
    const auto path = temp_file("broken_ds");
    write_dataset(path.string(), bundle.valid);

    // corrupt the third line (header is line 1, so this is sample 2)
    std::string text = slurp(path);
    std::size_t pos = text.find('\n');
    pos = text.find('\n', pos + 1);
    REQUIRE(pos != std::string::npos);
    std::string broken = text.substr(0, pos + 1) + "not json{{{\n";
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << broken;
    }

    try {
        read_dataset(path.string());
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("reader rejects missing files, bad headers and bad labels") {
    CHECK_THROWS_AS(read_dataset("/nonexistent/dir/ds"), std::runtime_error);

    const auto path = temp_file("bad_header");
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "{\"task\":\"juggling\"}\n";
    }
    CHECK_THROWS_AS(read_dataset(path.string()), std::runtime_error);

    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "{\"task\":\"identification\",\"n_min\":5,\"n_max\":5,"
               "\"theta_max\":3.14,\"eps\":0.01,\"seed\":1,\"version\":1}\n"
            << "{\"label\":7,\"objects\":[]}\n";
    }
    try {
        read_dataset(path.string());
        FAIL("expected a label error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint round-trips every parameter bitwise") {
    ModelConfig cfg = default_config(LayerKind::rds, TaskKind::comparison, 3, 8);
    Model model = build_model(cfg, 4242);

    const auto path = temp_file("ckpt");
    save_checkpoint(path.string(), model, 4242);
    LoadedCheckpoint loaded = load_checkpoint(path.string());

    CHECK(loaded.seed == 4242);
    CHECK(loaded.model.config.layer_kind == cfg.layer_kind);
    CHECK(loaded.model.config.task == cfg.task);
    CHECK(loaded.model.config.h == cfg.h);
    CHECK(loaded.model.config.d == cfg.d);
    CHECK(loaded.model.config.d_u == cfg.d_u);
    CHECK(loaded.model.config.n_passes == cfg.n_passes);
    CHECK(loaded.model.config.n_min == cfg.n_min);
    CHECK(loaded.model.config.n_max == cfg.n_max);
    CHECK(count_params(loaded.model) == count_params(model));
    CHECK(params_hash(loaded.model.params) == params_hash(model.params));
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint rejects junk") {
    const auto path = temp_file("junk_ckpt");
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "{\"layer\":\"mpgnn\"";  // truncated JSON
    }
    CHECK_THROWS_AS(load_checkpoint(path.string()), std::runtime_error);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.json"), std::runtime_error);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
