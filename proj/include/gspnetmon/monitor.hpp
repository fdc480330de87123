#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gspnetmon/graph.hpp"
#include "gspnetmon/pyramid.hpp"
#include "gspnetmon/spectral.hpp"

namespace gspnetmon {

/// k = ceil(log2 N), computed in integers. Requires N >= 4.
std::size_t monitor_fan_in(std::size_t g1_size);

/// Which G1 nodes each monitor senses.
struct MonitorAssignment {
    /// blocks[i] lists the G1 ids sensed by monitor i, ascending.
    std::vector<std::vector<std::size_t>> blocks;
    std::size_t fan_in = 0;
    /// Monitor of every G1 node.
    std::vector<std::size_t> block_of;

    std::size_t monitor_count() const { return blocks.size(); }
};

struct MonitorLayer {
    LayerGraph g2;
    InterlayerCoupling coupling;  // layer 1 -> layer 2, one link per G1 node
    MonitorAssignment assignment;
};

/// Cuts the BFS order of G1 (from vertex 0, neighbors by ascending id,
/// restarting at the lowest unvisited id) into consecutive blocks of k nodes.
/// Monitors i and j are adjacent iff some node of block i is adjacent to some
/// node of block j in G1. Throws ParameterError for |G1| < 4.
MonitorLayer build_monitor_layer(const LayerGraph& g1);

/// x2_i = sum of x1 over block i, summed in ascending id order.
GraphSignal aggregate(const GraphSignal& x1, const MonitorAssignment& a);

struct ReductionReport {
    std::size_t g1_size = 0;
    std::size_t fan_in = 0;
    std::size_t g2_size = 0;
    /// |G2| followed by each pyramid level.
    std::vector<std::size_t> level_sizes;
    double reduction_factor = 0.0;
};

ReductionReport reduction_report(std::size_t g1_size, std::size_t levels);

/// mean + c * sample standard deviation. Needs at least 5 ratios.
double threshold_from_ratios(std::span<const double> ratios, double safety = 4.0);

/// High-frequency ratio of the coarsest approximation of x2 under `plan`.
double coarsest_hf_ratio(const PyramidPlan& plan, const Vector& x2, double cutoff_fraction = 0.5);

/// tau from baseline intervals on G2 (at least 5).
double calibrate_threshold(const PyramidPlan& plan, std::span<const GraphSignal> baselines,
                           double cutoff_fraction = 0.5, double safety = 4.0);

struct DetectionResult {
    bool detected = false;
    double hf_ratio = 0.0;
    double tau = 0.0;
};

/// Ratio of a coarsest-level signal on that level's eigenbasis; detected iff
/// ratio > tau. Throws ParameterError if the level has fewer than 2 vertices.
DetectionResult detect(const Vector& coarsest_signal, const EigenBasis& coarsest_basis, double tau,
                       double cutoff_fraction = 0.5);

/// Same, for a pyramid produced by `plan`.
DetectionResult detect(const PyramidPlan& plan, const Pyramid& pyramid, double tau,
                       double cutoff_fraction = 0.5);

struct PathStep {
    std::size_t level = 0;
    std::size_t vertex = 0;  // id within that level
    double intensity = 0.0;
};

struct AnomalyReport {
    bool detected = false;
    double hf_ratio = 0.0;
    double tau = 0.0;
    std::vector<PathStep> path;
    std::vector<std::size_t> suspect_g2;
    std::vector<std::size_t> suspect_g1;
    std::size_t nodes_examined = 0;
};

/// Report for a negative detection: no path, no suspects.
AnomalyReport quiet_report(const DetectionResult& detection);

/// Coarse-to-fine search. At the coarsest level every vertex is ranked by
/// |detail| (|approx - mean| when the detail is numerically zero) and the top_m
/// are kept. Each kept vertex is mapped to its parent one level finer, and the
/// parent plus its neighbors there are re-ranked the same way. Level-0 winners
/// are the suspect monitors; their blocks are the suspect G1 nodes.
/// Throws UsageError unless detection.detected.
AnomalyReport localize(const Pyramid& pyramid, const MonitorAssignment& a,
                       const DetectionResult& detection, std::size_t top_m = 1);

/// {"detected", "hf_ratio", "tau", "path", "suspect_g2", "suspect_g1", "nodes_examined"}
std::string report_to_json(const AnomalyReport& report);

}  // namespace gspnetmon
