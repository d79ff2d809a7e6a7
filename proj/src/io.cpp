#include "decon/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "decon/errors.hpp"

namespace decon::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JsonWriter

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_stack_.empty()) {
        if (!first_stack_.back()) out_ += ',';
        first_stack_.back() = false;
    }
}

void JsonWriter::begin_object() {
    separator();
    out_ += '{';
    first_stack_.push_back(true);
}

void JsonWriter::end_object() {
    out_ += '}';
    first_stack_.pop_back();
}

void JsonWriter::begin_array() {
    separator();
    out_ += '[';
    first_stack_.push_back(true);
}

void JsonWriter::end_array() {
    out_ += ']';
    first_stack_.pop_back();
}

void JsonWriter::key(const std::string& name) {
    separator();
    out_ += '"';
    out_ += name;
    out_ += "\":";
    pending_key_ = true;
}

void JsonWriter::value(double v) {
    separator();
    out_ += format_double(v);
}

void JsonWriter::value(std::int64_t v) {
    separator();
    out_ += std::to_string(v);
}

void JsonWriter::value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
}

void JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
}

void JsonWriter::value(const std::string& v) {
    separator();
    out_ += '"';
    for (char c : v) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
}

void JsonWriter::value_array(const std::vector<double>& v) {
    begin_array();
    for (double x : v) value(x);
    end_array();
}

void JsonWriter::value_array(const std::vector<int>& v) {
    begin_array();
    for (int x : v) value(x);
    end_array();
}

void JsonWriter::value_array(const std::vector<std::size_t>& v) {
    begin_array();
    for (std::size_t x : v) value(x);
    end_array();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path);
    out << contents;
}

namespace {

json parse_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace

std::size_t Dataset::n_sources() const {
    return is_empirical() ? empirical().sources.size() : discrete().sources.size();
}

Dataset read_dataset(const std::string& path) {
    const json j = parse_file(path);
    Dataset out;
    if (j.contains("atoms")) {
        DiscreteDataset d;
        d.atoms = j.at("atoms").get<std::vector<std::string>>();
        std::vector<std::pair<int, json>> sources;
        for (const auto& src : j.at("sources")) sources.emplace_back(src.at("index").get<int>(), src);
        std::sort(sources.begin(), sources.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [index, src] : sources) {
            if (src.contains("mass")) {
                d.sources.emplace_back(SimplexPoint::normalized(src.at("mass").get<std::vector<double>>()));
                d.counts_total.push_back(src.value("n", 0));
            } else {
                const auto counts = src.at("counts").get<std::vector<double>>();
                double total = 0.0;
                for (double c : counts) total += c;
                if (total <= 0.0) throw InputError("dataset source has zero total count");
                std::vector<double> mass(counts);
                for (auto& m : mass) m /= total;
                d.sources.emplace_back(SimplexPoint::normalized(std::move(mass)));
                d.counts_total.push_back(static_cast<std::size_t>(total));
            }
            if (d.sources.back().size() != d.atoms.size())
                throw InputError("dataset source mass length does not match atoms");
        }
        out.data = std::move(d);
        return out;
    }
    EmpiricalDataset e;
    e.dim = j.at("dim").get<std::size_t>();
    std::vector<std::pair<int, json>> sources;
    for (const auto& src : j.at("sources")) sources.emplace_back(src.at("index").get<int>(), src);
    std::sort(sources.begin(), sources.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [index, src] : sources) {
        const auto& pts = src.at("points");
        std::vector<double> flat;
        flat.reserve(pts.size() * e.dim);
        for (const auto& p : pts) {
            if (p.size() != e.dim) throw InputError("dataset point has wrong dimension");
            for (const auto& x : p) flat.push_back(x.get<double>());
        }
        e.sources.emplace_back(std::move(flat), e.dim, index);
    }
    out.data = std::move(e);
    return out;
}

void write_dataset(const std::string& path, const EmpiricalDataset& data) {
    JsonWriter w;
    w.begin_object();
    w.key("dim");
    w.value(data.dim);
    w.key("sources");
    w.begin_array();
    for (const auto& s : data.sources) {
        w.begin_object();
        w.key("index");
        w.value(s.source_index());
        w.key("points");
        w.begin_array();
        for (std::size_t i = 0; i < s.size(); ++i) {
            w.begin_array();
            for (std::size_t k = 0; k < s.dim(); ++k) w.value(s.data()[i * s.dim() + k]);
            w.end_array();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_text_file(path, w.take() + "\n");
}

void write_dataset(const std::string& path, const DiscreteDataset& data) {
    JsonWriter w;
    w.begin_object();
    w.key("atoms");
    w.begin_array();
    for (const auto& a : data.atoms) w.value(a);
    w.end_array();
    w.key("sources");
    w.begin_array();
    for (std::size_t i = 0; i < data.sources.size(); ++i) {
        w.begin_object();
        w.key("index");
        w.value(static_cast<std::int64_t>(i));
        w.key("mass");
        w.value_array(data.sources[i].mass());
        if (i < data.counts_total.size() && data.counts_total[i] > 0) {
            w.key("n");
            w.value(data.counts_total[i]);
        }
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_text_file(path, w.take() + "\n");
}

PartialLabelMatrix read_labels(const std::string& path) {
    const json j = parse_file(path);
    const json& rows = j.is_array() ? j : j.at("labels");
    return PartialLabelMatrix(rows.get<std::vector<std::vector<int>>>());
}

void write_labels(const std::string& path, const std::vector<std::vector<int>>& rows) {
    JsonWriter w;
    w.begin_object();
    w.key("labels");
    w.begin_array();
    for (const auto& row : rows) w.value_array(row);
    w.end_array();
    w.end_object();
    write_text_file(path, w.take() + "\n");
}

InstanceSpec read_instance_spec(const std::string& path) {
    const json j = parse_file(path);
    InstanceSpec spec;
    spec.l = j.at("l").get<std::size_t>();
    spec.m = j.value("m", spec.l);
    const std::string kind = j.value("base_kind", std::string("anchored_discrete"));
    if (kind == "anchored_discrete") {
        spec.base_kind = BaseKind::anchored_discrete;
    } else if (kind == "truncated_gaussian") {
        spec.base_kind = BaseKind::truncated_gaussian;
    } else {
        throw InputError("unknown base_kind: " + kind);
    }
    spec.n_atoms = j.value("atoms", spec.n_atoms);
    if (j.contains("means")) {
        const auto means = j.at("means").get<std::vector<double>>();
        std::vector<double> sigmas(means.size(), 1.0);
        if (j.contains("sigmas")) sigmas = j.at("sigmas").get<std::vector<double>>();
        const double hw = j.value("slab_halfwidth", 0.5);
        for (std::size_t i = 0; i < means.size(); ++i)
            spec.gaussians.push_back({means[i], sigmas[i], means[i] - hw, means[i] + hw});
    }
    if (j.contains("mixing") && j.at("mixing").is_array()) {
        MixingMatrix pi;
        pi.rows = j.at("mixing").get<std::vector<std::vector<double>>>();
        pi.validate();
        spec.mixing = std::move(pi);
    }
    spec.min_singular_value = j.value("min_singular_value", spec.min_singular_value);
    if (j.contains("labels")) {
        spec.with_labels = true;
        if (j.at("labels").is_array())
            spec.labels = j.at("labels").get<std::vector<std::vector<int>>>();
    }
    spec.n_per_source = j.value("n", spec.n_per_source);
    spec.n_oracle = j.value("n_oracle", spec.n_oracle);
    spec.seed = j.value("seed", spec.seed);
    return spec;
}

void write_truth(const std::string& path, const SynthInstance& instance) {
    JsonWriter w;
    w.begin_object();
    w.key("mixing");
    w.begin_array();
    for (const auto& row : instance.mixing.rows) w.value_array(row);
    w.end_array();
    if (instance.spec.base_kind == BaseKind::anchored_discrete) {
        w.key("base_kind");
        w.value("anchored_discrete");
        w.key("bases");
        w.begin_array();
        for (const auto& b : instance.bases) w.value_array(b.mass());
        w.end_array();
    } else {
        w.key("base_kind");
        w.value("truncated_gaussian");
        w.key("gaussians");
        w.begin_array();
        for (const auto& g : instance.gaussians) {
            w.begin_object();
            w.key("mean");
            w.value(g.mean);
            w.key("sigma");
            w.value(g.sigma);
            w.key("slab_lo");
            w.value(g.slab_lo);
            w.key("slab_hi");
            w.value(g.slab_hi);
            w.end_object();
        }
        w.end_array();
        w.key("oracle_points");
        w.begin_array();
        for (const auto& pts : instance.oracle_points) w.value_array(pts);
        w.end_array();
    }
    w.end_object();
    write_text_file(path, w.take() + "\n");
}

TruthFile read_truth(const std::string& path) {
    const json j = parse_file(path);
    TruthFile out;
    out.mixing.rows = j.at("mixing").get<std::vector<std::vector<double>>>();
    const std::string kind = j.at("base_kind").get<std::string>();
    if (kind == "anchored_discrete") {
        out.base_kind = BaseKind::anchored_discrete;
        for (const auto& b : j.at("bases"))
            out.bases.emplace_back(SimplexPoint::normalized(b.get<std::vector<double>>()));
    } else {
        out.base_kind = BaseKind::truncated_gaussian;
        for (const auto& g : j.at("gaussians"))
            out.gaussians.push_back({g.at("mean").get<double>(), g.at("sigma").get<double>(),
                                     g.at("slab_lo").get<double>(), g.at("slab_hi").get<double>()});
        out.oracle_points = j.at("oracle_points").get<std::vector<std::vector<double>>>();
    }
    return out;
}

void write_conditions(const std::string& path, const SynthInstance& instance) {
    JsonWriter w;
    w.begin_object();
    w.key(instance.conditions.base_condition_name);
    w.value(instance.conditions.base_condition);
    w.key("mixing_min_singular");
    w.value(instance.conditions.mixing_min_singular);
    w.key("full_rank");
    w.value(instance.conditions.full_rank);
    if (instance.conditions.condition_c.has_value()) {
        w.key("condition_c");
        w.value(*instance.conditions.condition_c);
    }
    if (instance.conditions.condition_d.has_value()) {
        w.key("condition_d");
        w.value(*instance.conditions.condition_d);
    }
    w.end_object();
    write_text_file(path, w.take() + "\n");
}

}  // namespace decon::io
