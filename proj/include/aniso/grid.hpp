#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aniso {

// Axis-aligned box (lower_i, upper_i) with lower_i < upper_i.
struct BoxDomain {
    std::vector<double> lower;
    std::vector<double> upper;

    BoxDomain(std::vector<double> lo, std::vector<double> up);
    std::size_t dim() const { return lower.size(); }
    double extent(std::size_t axis) const { return upper[axis] - lower[axis]; }
    bool operator==(const BoxDomain&) const = default;
};

// Uniform tensor-product grid of interior nodes on a box. Axis i carries
// counts_i interior nodes at lower_i + k*spacing_i, k = 1..counts_i, with
// spacing_i = extent_i / (counts_i + 1). Boundary nodes are not stored; every
// operation treats values outside the interior set as exactly zero.
class TensorGrid {
  public:
    TensorGrid(BoxDomain box, std::vector<std::int64_t> counts);

    std::size_t dim() const { return counts_.size(); }
    const BoxDomain& box() const { return box_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    const std::vector<double>& spacings() const { return spacing_; }
    double spacing(std::size_t axis) const { return spacing_[axis]; }
    std::int64_t count(std::size_t axis) const { return counts_[axis]; }

    std::size_t size() const { return size_; }
    double cell_volume() const { return cell_volume_; }

    // flat-index stride of one step along `axis` (row-major, last axis fastest)
    std::size_t stride(std::size_t axis) const { return stride_[axis]; }
    // number of grid lines running along `axis`
    std::size_t line_count(std::size_t axis) const { return size_ / counts_[axis]; }
    // flat index of the first node of line `l` along `axis`
    std::size_t line_base(std::size_t axis, std::size_t l) const;

    // coordinate of interior node k (1-based, k in 1..counts) on `axis`
    double coordinate(std::size_t axis, std::int64_t k) const {
        return box_.lower[axis] + static_cast<double>(k) * spacing_[axis];
    }

    bool operator==(const TensorGrid& o) const {
        return box_ == o.box_ && counts_ == o.counts_;
    }

  private:
    BoxDomain box_;
    std::vector<std::int64_t> counts_;
    std::vector<double> spacing_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 0;
    double cell_volume_ = 0.0;
};

TensorGrid build_grid(BoxDomain box, std::vector<std::int64_t> counts);

// Nodal values over the interior nodes, row-major with the last axis fastest,
// extended by zero outside the domain (homogeneous Dirichlet).
class GridFunction {
  public:
    GridFunction(TensorGrid grid, std::vector<double> values);

    const TensorGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& value_vector() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

  private:
    TensorGrid grid_;
    std::vector<double> values_;
};

// Evaluates f at every interior node. Throws std::domain_error on a
// non-finite sample.
GridFunction sample(const std::function<double(std::span<const double>)>& f,
                    const TensorGrid& grid);

// (u(x + spacing*e_axis) - u(x)) / spacing at the counts+1 staggered positions
// per line, with zero extension at both ends. The result has the shape of the
// grid with `axis` extended by one, same row-major layout.
std::vector<double> forward_diff(const GridFunction& u, std::size_t axis);

// u(x + m*spacing*e_axis) - u(x) over the interior nodes (m != 0), zero
// extension outside.
std::vector<double> shift_diff(const GridFunction& u, std::size_t axis, std::int64_t m);

// Line-oriented text format, bit-exact round trip (17 significant digits).
class ParseError : public std::runtime_error {
  public:
    enum class Kind { header, dimension, value, io };
    ParseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

void write_field(const GridFunction& u, const std::string& path);
GridFunction read_field(const std::string& path);

}  // namespace aniso
