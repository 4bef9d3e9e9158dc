#ifndef BERNFILTER_DATASET_IO_HPP
#define BERNFILTER_DATASET_IO_HPP

#include "bernfilter/bernstein.hpp"
#include "bernfilter/classify.hpp"
#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace bernfilter {

// Text formats
//
//   edge list   one "u v" pair of 0-based ids per line; '#' lines ignored
//   matrix CSV  one row per node, comma-separated, no header
//   labels      one integer class id per line
//   coeffs      line 1: K; line 2: K+1 space-separated values, 17 sig. digits
//   curve CSV   header "lambda,value", then one row per grid point
//   split       one token per node: train, val, test or none
//
// All numeric readers reject NaN and Inf.

std::vector<Edge> read_edge_list(const std::filesystem::path& path);
/// Node count is max id + 1 unless num_nodes is given.
Graph load_graph(const std::filesystem::path& path, std::optional<std::size_t> num_nodes = std::nullopt);
void write_edge_list(const std::filesystem::path& path, const Graph& graph);

Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// A single-column matrix CSV flattened to a vector.
std::vector<double> read_signal(const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, std::span<const double> signal);

std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

BernCoeffs read_coeffs(const std::filesystem::path& path);
void write_coeffs(const std::filesystem::path& path, const BernCoeffs& c);
/// Coefficients as a two-column "k,theta" CSV for plotting.
void write_coeffs_csv(const std::filesystem::path& path, const BernCoeffs& c);

Mask read_mask(const std::filesystem::path& path);

SplitMasks read_split(const std::filesystem::path& path);
void write_split(const std::filesystem::path& path, const SplitMasks& split);

struct CurveTable {
  std::vector<double> lambda;
  std::vector<double> value;
};

/// Filter response on `points` uniformly spaced lambdas from 0 to 2.
CurveTable export_curve(const BernCoeffs& c, std::size_t points = 1000);
CurveTable sample_curve(const FilterFn& h, std::size_t points = 1000);
void write_curve_csv(const std::filesystem::path& path, const CurveTable& curve);
CurveTable read_curve_csv(const std::filesystem::path& path);

/// Reads edges.txt, features.csv and labels.txt from dir. The class count is
/// max label + 1 unless num_classes is given, in which case labels at or
/// above it are rejected.
NodeDataset load_dataset(const std::filesystem::path& dir, std::optional<int> num_classes = std::nullopt);
void save_dataset(const std::filesystem::path& dir, const NodeDataset& data);

enum class GridSignalKind { Random, Gradient, Checker };
GridSignalKind parse_grid_signal_kind(std::string_view name);

/// Values in [0, 1] for an h x w image, row-major. Random is uniform per
/// pixel from seed; gradient ramps from the top-left to the bottom-right
/// corner; checker alternates 1/0 starting with 1.
std::vector<double> synth_grid_signal(std::size_t height, std::size_t width, std::uint64_t seed,
                                      GridSignalKind kind);

/// Two cliques of cluster_size nodes joined by one bridge edge. Features are
/// the one-hot cluster id plus Gaussian noise of the given standard
/// deviation; labels are the cluster id.
NodeDataset two_cluster_dataset(std::size_t cluster_size, double noise, std::uint64_t seed);

}  // namespace bernfilter

#endif
