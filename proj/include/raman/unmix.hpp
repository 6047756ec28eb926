#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "raman/hypercube.hpp"

namespace raman::unmix {

// One endmember spectrum per column, B x K.
struct EndmemberSet {
    Eigen::MatrixXd spectra;
    std::vector<std::string> names;
};

// H x W x K abundance planes, all values >= 0, laid out (row, col, plane).
struct AbundanceCube {
    int height = 0;
    int width = 0;
    int planes = 0;
    std::vector<double> values;

    double at(int row, int col, int k) const {
        return values[(static_cast<size_t>(row) * width + col) * planes + k];
    }
};

// H x W integer labels in [0, K).
struct LabelMap {
    int height = 0;
    int width = 0;
    std::vector<int> labels;

    int at(int row, int col) const { return labels[static_cast<size_t>(row) * width + col]; }
};

// Vertex component analysis: extracts k endmembers as projected extreme
// pixels. Deterministic given the seed (only the random projection
// directions consume randomness).
EndmemberSet vca(const HyperCube& cube, int k, uint64_t seed);

// min ||Ax - b||_2 subject to x >= 0, by the Lawson-Hanson active-set method
// run to finite termination.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Per-pixel NNLS of every spectrum against the endmember matrix.
AbundanceCube abundance_map(const HyperCube& cube, const EndmemberSet& ems);

// argmax over planes; ties resolved to the lowest index.
LabelMap classify_pixels(const AbundanceCube& ab);

// Fraction of pixels whose labels agree.
double classification_accuracy(const LabelMap& pred, const LabelMap& ref);

// Angle in radians between two spectra viewed as vectors.
double spectral_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Best assignment of estimated endmember columns to reference columns by
// exhaustive permutation over spectral angles (K <= 8). Returns per-column
// angles after matching, indexed by reference column.
std::vector<double> match_endmembers(const Eigen::MatrixXd& estimated,
                                     const Eigen::MatrixXd& reference);

}  // namespace raman::unmix
