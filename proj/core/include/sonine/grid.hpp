#pragma once

#include <cstddef>
#include <vector>

namespace sonine {

enum class MeshKind { Uniform, Graded, Custom };

// Time nodes 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
public:
    static TimeGrid uniform(double T, int n_steps);
    // t_j = T (j/N)^r, r >= 1.
    static TimeGrid graded(double T, int n_steps, double r);
    static TimeGrid from_nodes(std::vector<double> nodes);

    double horizon() const { return nodes_.back(); }
    int n_steps() const { return static_cast<int>(nodes_.size()) - 1; }
    MeshKind mesh() const { return mesh_; }
    double grading() const { return r_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double operator[](std::size_t j) const { return nodes_[j]; }
    // Uniform spacing (also Graded with r = 1).
    bool is_uniform() const { return mesh_ == MeshKind::Uniform || (mesh_ == MeshKind::Graded && r_ == 1.0); }

private:
    TimeGrid(MeshKind mesh, double r, std::vector<double> nodes) : mesh_(mesh), r_(r), nodes_(std::move(nodes)) {}

    MeshKind mesh_;
    double r_;
    std::vector<double> nodes_;
};

}  // namespace sonine
