#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "decon/harness.hpp"
#include "decon/measure.hpp"
#include "decon/partial_label.hpp"

namespace decon::io {

/// Minimal deterministic JSON emitter. Keys keep insertion order; doubles are
/// printed with %.17g so files round-trip and are byte-identical for equal
/// inputs regardless of worker count.
class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& name);
    void value(double v);
    void value(std::int64_t v);
    void value(std::uint64_t v);
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(bool v);
    void value(const std::string& v);
    void value(const char* v) { value(std::string(v)); }
    void value_array(const std::vector<double>& v);
    void value_array(const std::vector<int>& v);
    void value_array(const std::vector<std::size_t>& v);

private:
    void separator();
    std::string out_;
    std::vector<bool> first_stack_;
    bool pending_key_ = false;
};

std::string format_double(double v);

// ---------------------------------------------------------------------------
// Dataset files

struct Dataset {
    std::variant<EmpiricalDataset, DiscreteDataset> data;

    bool is_empirical() const { return std::holds_alternative<EmpiricalDataset>(data); }
    const EmpiricalDataset& empirical() const { return std::get<EmpiricalDataset>(data); }
    const DiscreteDataset& discrete() const { return std::get<DiscreteDataset>(data); }
    std::size_t n_sources() const;
};

Dataset read_dataset(const std::string& path);
void write_dataset(const std::string& path, const EmpiricalDataset& data);
void write_dataset(const std::string& path, const DiscreteDataset& data);

PartialLabelMatrix read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<std::vector<int>>& rows);

InstanceSpec read_instance_spec(const std::string& path);

struct TruthFile {
    MixingMatrix mixing;
    BaseKind base_kind = BaseKind::anchored_discrete;
    std::vector<SimplexPoint> bases;                 // discrete
    std::vector<GaussianBase> gaussians;             // continuous
    std::vector<std::vector<double>> oracle_points;  // continuous, per base
};

void write_truth(const std::string& path, const SynthInstance& instance);
TruthFile read_truth(const std::string& path);

void write_conditions(const std::string& path, const SynthInstance& instance);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace decon::io
