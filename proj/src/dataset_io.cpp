#include "spatialsim/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace spatialsim {

namespace {

using nlohmann::json;

void append_config(std::string& out, const char* key, const Configuration& config) {
    out += '"';
    out += key;
    out += "\":[";
    for (std::size_t i = 0; i < config.objects.size(); ++i) {
        if (i > 0) out += ',';
        out += '[';
        const FeatureVector f = feature_vector(config.objects[i]);
        for (std::size_t c = 0; c < f.size(); ++c) {
            if (c > 0) out += ',';
            out += format_double(f[c]);
        }
        out += ']';
    }
    out += ']';
}

[[noreturn]] void line_error(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

Configuration parse_config(const json& arr, const std::string& path, std::size_t line,
                           const std::string& field) {
    if (!arr.is_array() || arr.empty())
        line_error(path, line, field + " must be a non-empty array of feature vectors");
    Configuration config;
    config.objects.reserve(arr.size());
    for (const json& vec : arr) {
        if (!vec.is_array() || vec.size() != kFeatureDim)
            line_error(path, line, field + ": feature vector must hold " +
                                       std::to_string(kFeatureDim) + " floats");
        FeatureVector f{};
        for (std::size_t c = 0; c < f.size(); ++c) {
            if (!vec[c].is_number()) line_error(path, line, field + ": non-numeric feature");
            f[c] = vec[c].get<double>();
        }
        try {
            config.objects.push_back(decode_feature_vector(f));
        } catch (const std::exception& e) {
            line_error(path, line, field + ": " + e.what());
        }
    }
    return config;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_dataset(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    std::string line = "{\"task\":\"" + task_name(dataset.meta.task) + "\"";
    line += ",\"n_min\":" + std::to_string(dataset.meta.n_min);
    line += ",\"n_max\":" + std::to_string(dataset.meta.n_max);
    line += ",\"theta_max\":" + format_double(dataset.meta.theta_max);
    line += ",\"eps\":" + format_double(dataset.meta.eps);
    line += ",\"seed\":" + std::to_string(dataset.meta.seed);
    line += ",\"version\":" + std::to_string(dataset.meta.version);
    line += "}\n";
    out << line;

    const bool comparison = dataset.meta.task == TaskKind::comparison;
    for (const Sample& sample : dataset.samples) {
        line = "{\"label\":" + std::to_string(sample.label) + ",";
        if (comparison) {
            append_config(line, "objects1", sample.first);
            line += ',';
            append_config(line, "objects2", sample.second);
        } else {
            append_config(line, "objects", sample.first);
        }
        line += "}\n";
        out << line;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);

    Dataset dataset;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.empty()) continue;
        json record = json::parse(text, nullptr, false);
        if (record.is_discarded()) line_error(path, line_no, "malformed JSON record");
        try {
            if (line_no == 1) {
                dataset.meta.task = task_from_name(record.at("task").get<std::string>());
                dataset.meta.n_min = record.at("n_min").get<int>();
                dataset.meta.n_max = record.at("n_max").get<int>();
                dataset.meta.theta_max = record.at("theta_max").get<double>();
                dataset.meta.eps = record.at("eps").get<double>();
                dataset.meta.seed = record.at("seed").get<std::uint64_t>();
                dataset.meta.version = record.at("version").get<int>();
                continue;
            }
            Sample sample;
            const int label = record.at("label").get<int>();
            if (label != 0 && label != 1)
                line_error(path, line_no, "label must be 0 or 1");
            sample.label = label;
            if (dataset.meta.task == TaskKind::comparison) {
                if (record.contains("objects"))
                    line_error(path, line_no, "comparison record may not carry \"objects\"");
                sample.first = parse_config(record.at("objects1"), path, line_no, "objects1");
                sample.second = parse_config(record.at("objects2"), path, line_no, "objects2");
            } else {
                if (record.contains("objects1") || record.contains("objects2"))
                    line_error(path, line_no, "identification record must carry \"objects\" only");
                sample.first = parse_config(record.at("objects"), path, line_no, "objects");
            }
            dataset.samples.push_back(std::move(sample));
        } catch (const json::exception& e) {
            line_error(path, line_no, e.what());
        } catch (const std::invalid_argument& e) {
            line_error(path, line_no, e.what());
        }
    }
    if (line_no == 0) throw std::runtime_error(path + ": empty dataset file");
    return dataset;
}

}  // namespace spatialsim
