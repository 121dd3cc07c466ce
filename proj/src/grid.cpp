#include "aniso/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aniso {

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> up)
    : lower(std::move(lo)), upper(std::move(up)) {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("box bounds must be non-empty and of equal length");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
            throw std::invalid_argument("box requires finite lower_i < upper_i");
    }
}

TensorGrid::TensorGrid(BoxDomain box, std::vector<std::int64_t> counts)
    : box_(std::move(box)), counts_(std::move(counts)) {
    if (counts_.size() != box_.dim())
        throw std::invalid_argument("counts dimension must match the box");
    spacing_.resize(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 1) throw std::invalid_argument("counts must be >= 1 per axis");
        spacing_[i] = box_.extent(i) / static_cast<double>(counts_[i] + 1);
        if (!(spacing_[i] > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    }
    stride_.assign(counts_.size(), 1);
    size_ = 1;
    for (std::size_t i = counts_.size(); i-- > 0;) {
        stride_[i] = size_;
        size_ *= static_cast<std::size_t>(counts_[i]);
    }
    cell_volume_ = 1.0;
    for (double d : spacing_) cell_volume_ *= d;
}

std::size_t TensorGrid::line_base(std::size_t axis, std::size_t l) const {
    const std::size_t st = stride_[axis];
    const std::size_t outer = l / st;
    const std::size_t inner = l % st;
    return outer * (static_cast<std::size_t>(counts_[axis]) * st) + inner;
}

TensorGrid build_grid(BoxDomain box, std::vector<std::int64_t> counts) {
    return TensorGrid(std::move(box), std::move(counts));
}

GridFunction::GridFunction(TensorGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("value array size must match the grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

GridFunction sample(const std::function<double(std::span<const double>)>& f,
                    const TensorGrid& grid) {
    const std::size_t n = grid.dim();
    std::vector<double> coord(n);
    std::vector<std::int64_t> idx(n, 1);
    std::vector<double> vals(grid.size());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        for (std::size_t a = 0; a < n; ++a) coord[a] = grid.coordinate(a, idx[a]);
        const double v = f(coord);
        if (!std::isfinite(v)) throw std::domain_error("sampled field value is not finite");
        vals[flat] = v;
        for (std::size_t a = n; a-- > 0;) {
            if (++idx[a] <= grid.count(a)) break;
            idx[a] = 1;
        }
    }
    return GridFunction(grid, std::move(vals));
}

std::vector<double> forward_diff(const GridFunction& u, std::size_t axis) {
    const TensorGrid& g = u.grid();
    if (axis >= g.dim()) throw std::invalid_argument("axis out of range");
    const std::size_t n = static_cast<std::size_t>(g.count(axis));
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const double inv_d = 1.0 / g.spacing(axis);
    std::vector<double> out(lines * (n + 1));

    // output layout: same ordering, axis extended to n+1 entries
    const std::span<const double> v = u.values();
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t in_base = g.line_base(axis, l);
        const std::size_t outer = l / st;
        const std::size_t inner = l % st;
        const std::size_t out_base = outer * ((n + 1) * st) + inner;
        double prev = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double cur = v[in_base + k * st];
            out[out_base + k * st] = (cur - prev) * inv_d;
            prev = cur;
        }
        out[out_base + n * st] = (0.0 - prev) * inv_d;
    }
    return out;
}

std::vector<double> shift_diff(const GridFunction& u, std::size_t axis, std::int64_t m) {
    const TensorGrid& g = u.grid();
    if (axis >= g.dim()) throw std::invalid_argument("axis out of range");
    if (m == 0) throw std::invalid_argument("shift must be nonzero");
    const std::int64_t n = g.count(axis);
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const std::span<const double> v = u.values();
    std::vector<double> out(u.size());
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t base = g.line_base(axis, l);
        for (std::int64_t k = 0; k < n; ++k) {
            const std::int64_t ks = k + m;
            const double shifted =
                (ks >= 0 && ks < n) ? v[base + static_cast<std::size_t>(ks) * st] : 0.0;
            out[base + static_cast<std::size_t>(k) * st] =
                shifted - v[base + static_cast<std::size_t>(k) * st];
        }
    }
    return out;
}

namespace {

std::string format_values(std::span<const double> xs) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
        if (i) out += ' ';
        out += buf;
    }
    return out;
}

}  // namespace

void write_field(const GridFunction& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: LF endings everywhere
    if (!os) throw ParseError(ParseError::Kind::io, "cannot open for writing: " + path);
    const TensorGrid& g = u.grid();
    os << "ANISOFIELD 1\n";
    os << "dim " << g.dim() << "\n";
    os << "counts";
    for (auto c : g.counts()) os << ' ' << c;
    os << "\n";
    os << "lower " << format_values(g.box().lower) << "\n";
    os << "upper " << format_values(g.box().upper) << "\n";
    char buf[64];
    for (double v : u.values()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << "\n";
    }
    if (!os) throw ParseError(ParseError::Kind::io, "write failed: " + path);
}

GridFunction read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError(ParseError::Kind::io, "cannot open for reading: " + path);

    std::string line;
    if (!std::getline(is, line) || line != "ANISOFIELD 1")
        throw ParseError(ParseError::Kind::header, "missing ANISOFIELD 1 header");

    auto expect_key = [&](const char* key) -> std::istringstream {
        if (!std::getline(is, line))
            throw ParseError(ParseError::Kind::header, std::string("missing line: ") + key);
        std::istringstream ss(line);
        std::string k;
        ss >> k;
        if (k != key)
            throw ParseError(ParseError::Kind::header, std::string("expected key: ") + key);
        return ss;
    };

    std::size_t dim = 0;
    {
        auto ss = expect_key("dim");
        if (!(ss >> dim) || dim == 0)
            throw ParseError(ParseError::Kind::header, "bad dimension");
    }
    std::vector<std::int64_t> counts(dim);
    {
        auto ss = expect_key("counts");
        for (auto& c : counts)
            if (!(ss >> c) || c < 1)
                throw ParseError(ParseError::Kind::dimension, "bad counts line");
        std::string extra;
        if (ss >> extra) throw ParseError(ParseError::Kind::dimension, "too many counts");
    }
    auto read_bounds = [&](const char* key) {
        std::vector<double> b(dim);
        auto ss = expect_key(key);
        for (auto& x : b)
            if (!(ss >> x) || !std::isfinite(x))
                throw ParseError(ParseError::Kind::dimension, std::string("bad bounds: ") + key);
        std::string extra;
        if (ss >> extra)
            throw ParseError(ParseError::Kind::dimension, std::string("too many bounds: ") + key);
        return b;
    };
    std::vector<double> lower = read_bounds("lower");
    std::vector<double> upper = read_bounds("upper");

    TensorGrid grid = [&] {
        try {
            return build_grid(BoxDomain(std::move(lower), std::move(upper)), std::move(counts));
        } catch (const std::invalid_argument& e) {
            throw ParseError(ParseError::Kind::dimension, e.what());
        }
    }();

    std::vector<double> vals;
    vals.reserve(grid.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v;
        std::string extra;
        if (!(ss >> v) || (ss >> extra))
            throw ParseError(ParseError::Kind::value, "bad value line: " + line);
        if (!std::isfinite(v))
            throw ParseError(ParseError::Kind::value, "non-finite value: " + line);
        vals.push_back(v);
    }
    if (vals.size() != grid.size())
        throw ParseError(ParseError::Kind::dimension, "value count does not match counts header");
    return GridFunction(std::move(grid), std::move(vals));
}

}  // namespace aniso
