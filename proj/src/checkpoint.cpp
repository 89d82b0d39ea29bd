#include "spatialsim/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "spatialsim/dataset_io.hpp"

namespace spatialsim {

namespace {
using nlohmann::json;
constexpr int kFormatVersion = 1;
}  // namespace

void save_checkpoint(const std::string& path, const Model& model, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    const ModelConfig& cfg = model.config;
    out << "{\"format\":\"spatialsim-checkpoint\",\"version\":" << kFormatVersion;
    out << ",\"seed\":" << seed;
    out << ",\"config\":{";
    out << "\"layer\":\"" << layer_name(cfg.layer_kind) << "\"";
    out << ",\"task\":\"" << task_name(cfg.task) << "\"";
    out << ",\"h\":" << cfg.h << ",\"d\":" << cfg.d << ",\"d_u\":" << cfg.d_u;
    out << ",\"n_passes\":" << cfg.n_passes;
    out << ",\"n_min\":" << cfg.n_min << ",\"n_max\":" << cfg.n_max;
    out << "},\"params\":[";
    bool first_entry = true;
    for (const ParamStore::Entry& entry : model.params.entries()) {
        if (!first_entry) out << ',';
        first_entry = false;
        const Matrix& value = entry.tensor->value;
        out << "\n{\"name\":\"" << entry.name << "\"";
        out << ",\"rows\":" << value.rows() << ",\"cols\":" << value.cols();
        out << ",\"values\":[";
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i > 0) out << ',';
            out << format_double(value.data()[i]);
        }
        out << "]}";
    }
    out << "\n]}\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "spatialsim-checkpoint")
            throw std::runtime_error("not a spatialsim checkpoint");
        if (doc.at("version").get<int>() != kFormatVersion)
            throw std::runtime_error("unsupported checkpoint version");

        const json& jc = doc.at("config");
        ModelConfig cfg;
        cfg.layer_kind = layer_from_name(jc.at("layer").get<std::string>());
        cfg.task = task_from_name(jc.at("task").get<std::string>());
        cfg.h = jc.at("h").get<int>();
        cfg.d = jc.at("d").get<int>();
        cfg.d_u = jc.at("d_u").get<int>();
        cfg.n_passes = jc.at("n_passes").get<int>();
        cfg.n_min = jc.at("n_min").get<int>();
        cfg.n_max = jc.at("n_max").get<int>();

        LoadedCheckpoint loaded;
        loaded.seed = doc.at("seed").get<std::uint64_t>();
        loaded.model = build_model(cfg, loaded.seed);

        const json& params = doc.at("params");
        if (params.size() != loaded.model.params.entries().size())
            throw std::runtime_error("parameter count mismatch");
        for (std::size_t i = 0; i < params.size(); ++i) {
            const json& jp = params[i];
            ParamStore::Entry& entry = loaded.model.params.entries()[i];
            if (jp.at("name").get<std::string>() != entry.name)
                throw std::runtime_error("unexpected parameter " +
                                         jp.at("name").get<std::string>() + ", expected " +
                                         entry.name);
            Matrix& value = entry.tensor->value;
            if (jp.at("rows").get<int>() != value.rows() ||
                jp.at("cols").get<int>() != value.cols())
                throw std::runtime_error("shape mismatch for parameter " + entry.name);
            const json& vals = jp.at("values");
            if (vals.size() != value.size())
                throw std::runtime_error("value count mismatch for parameter " + entry.name);
            for (std::size_t k = 0; k < value.size(); ++k)
                value.data()[k] = vals[k].get<double>();
        }
        return loaded;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
    }
}

}  // namespace spatialsim
