#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"

namespace dihoto {

/// Monotone surjection [n] -> [m], stored as its value list (size n+1).
using Surjection = std::vector<std::uint8_t>;

inline Surjection identity_surjection(int n)
{
    Surjection s(static_cast<std::size_t>(n + 1));
    std::iota(s.begin(), s.end(), std::uint8_t{0});
    return s;
}

inline bool is_identity(const Surjection& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != i)
            return false;
    return true;
}

/// outer ∘ inner
inline Surjection compose(const Surjection& outer, const Surjection& inner)
{
    Surjection r(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i)
        r[i] = outer[inner[i]];
    return r;
}

/// Constant surjection [n] -> [0].
inline Surjection constant_surjection(int n) { return Surjection(static_cast<std::size_t>(n + 1), 0); }

/**
 * A simplex in Eilenberg-Zilber normal form: a nondegenerate simplex
 * `base` pulled back along the surjection `degen`.
 */
struct Simplex {
    std::uint32_t base = 0;
    Surjection degen;

    int dim() const { return static_cast<int>(degen.size()) - 1; }
    bool nondegenerate() const { return is_identity(degen); }

    /// Pulls this simplex back along another surjection.
    Simplex degenerate(const Surjection& s) const { return {base, compose(degen, s)}; }

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

inline Simplex nondeg(std::uint32_t id, int dim) { return {id, identity_surjection(dim)}; }

inline std::string to_string(const Simplex& s)
{
    std::string out = std::to_string(s.base);
    if (!s.nondegenerate()) {
        out += "[";
        for (std::size_t i = 0; i < s.degen.size(); ++i) {
            if (i)
                out += ",";
            out += std::to_string(s.degen[i]);
        }
        out += "]";
    }
    return out;
}

class SSetBuilder;

/**
 * Finite simplicial set: nondegenerate simplices with face data in normal
 * form. Cheap to copy; the data is immutable and shared.
 */
class SSet {
  public:
    SSet() : data_(std::make_shared<Data>()) {}

    std::size_t size() const { return data_->dims.size(); }
    bool empty() const { return size() == 0; }
    int dim(std::uint32_t id) const { return data_->dims[id]; }

    /// Highest dimension of a nondegenerate simplex; -1 when empty.
    int dimension() const { return static_cast<int>(data_->by_dim.size()) - 1; }

    std::span<const std::uint32_t> of_dim(int d) const
    {
        if (d < 0 || d > dimension())
            return {};
        return data_->by_dim[static_cast<std::size_t>(d)];
    }
    std::size_t count(int d) const { return of_dim(d).size(); }

    std::span<const Simplex> faces(std::uint32_t id) const { return data_->faces[id]; }
    Simplex simplex(std::uint32_t id) const { return nondeg(id, dim(id)); }

    /// i-th face of an arbitrary simplex, renormalized.
    Simplex face(const Simplex& s, int i) const { return face_in(*data_, s, i); }

    /// Vertex `k` (0-based position) of a simplex.
    std::uint32_t vertex(const Simplex& s, int k) const
    {
        Simplex cur = s;
        // drop faces above k, then below
        for (int i = cur.dim(); i > k; --i)
            cur = face(cur, i);
        while (cur.dim() > 0)
            cur = face(cur, 0);
        return cur.base;
    }

    bool same(const SSet& o) const { return data_ == o.data_; }

    long euler_characteristic() const
    {
        long chi = 0;
        for (int d = 0; d <= dimension(); ++d)
            chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(count(d));
        return chi;
    }

    /// One line per nondegenerate simplex `dim id : face0 face1 ...`.
    std::string dump() const
    {
        std::ostringstream os;
        for (std::uint32_t id = 0; id < size(); ++id) {
            os << dim(id) << " " << id << " :";
            for (auto const& f : faces(id))
                os << " " << to_string(f);
            os << "\n";
        }
        return os.str();
    }

  private:
    friend class SSetBuilder;

    struct Data {
        std::vector<int> dims;
        std::vector<std::vector<Simplex>> faces;
        std::vector<std::vector<std::uint32_t>> by_dim;
    };

    static Simplex face_in(const Data& d, const Simplex& s, int i)
    {
        const int n = s.dim();
        if (n <= 0 || i < 0 || i > n)
            throw std::out_of_range("face index out of range");
        Surjection r;
        r.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k <= n; ++k)
            if (k != i)
                r.push_back(s.degen[static_cast<std::size_t>(k)]);
        const std::uint8_t v = s.degen[static_cast<std::size_t>(i)];
        const bool hit = (i > 0 && s.degen[static_cast<std::size_t>(i - 1)] == v) ||
                         (i < n && s.degen[static_cast<std::size_t>(i + 1)] == v);
        if (hit)
            return {s.base, std::move(r)};
        for (auto& t : r)
            if (t > v)
                --t;
        const Simplex& f = d.faces[s.base][v];
        return {f.base, compose(f.degen, r)};
    }

    explicit SSet(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

    std::shared_ptr<const Data> data_;
};

/// Incremental construction of an SSet; faces must reference earlier simplices.
class SSetBuilder {
  public:
    explicit SSetBuilder(bool validate = true) : validate_(validate) {}

    std::uint32_t add_vertex() { return add(0, {}); }

    std::uint32_t add(int dim, std::vector<Simplex> faces)
    {
        if (dim < 0)
            throw std::invalid_argument("negative simplex dimension");
        if (faces.size() != static_cast<std::size_t>(dim == 0 ? 0 : dim + 1))
            throw std::invalid_argument("wrong number of faces");
        for (auto const& f : faces) {
            if (f.base >= data_.dims.size())
                throw std::invalid_argument("face refers to unknown simplex");
            if (f.dim() != dim - 1)
                throw std::invalid_argument("face has wrong dimension");
            if (!f.degen.empty() && f.degen.back() != data_.dims[f.base])
                throw std::invalid_argument("face degeneracy does not match its base");
        }
        const auto id = static_cast<std::uint32_t>(data_.dims.size());
        data_.dims.push_back(dim);
        data_.faces.push_back(std::move(faces));
        if (data_.by_dim.size() <= static_cast<std::size_t>(dim))
            data_.by_dim.resize(static_cast<std::size_t>(dim) + 1);
        data_.by_dim[static_cast<std::size_t>(dim)].push_back(id);
        if (validate_ && dim >= 2)
            check_identities(id);
        return id;
    }

    /// Convenience for simplices whose faces are all nondegenerate.
    std::uint32_t add_nd(int dim, const std::vector<std::uint32_t>& faces)
    {
        std::vector<Simplex> fs;
        for (auto f : faces)
            fs.push_back(nondeg(f, dim - 1));
        return add(dim, std::move(fs));
    }

    std::size_t size() const { return data_.dims.size(); }
    Simplex face(const Simplex& s, int i) const { return SSet::face_in(data_, s, i); }

    SSet build() const { return SSet(std::make_shared<const SSet::Data>(data_)); }

  private:
    void check_identities(std::uint32_t id) const
    {
        const Simplex s = nondeg(id, data_.dims[id]);
        const int n = s.dim();
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i) {
                auto a = face(face(s, j), i);
                auto b = face(face(s, i), j - 1);
                if (a != b)
                    throw std::logic_error("simplicial identity violated at simplex " + std::to_string(id));
            }
    }

    SSet::Data data_;
    bool validate_;
};

/// Simplicial map given by the images of nondegenerate simplices.
class SMap {
  public:
    SMap() = default;

    SMap(SSet source, SSet target, std::vector<Simplex> images, bool validate = true)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
    {
        if (images_.size() != source_.size())
            throw std::invalid_argument("SMap needs one image per source simplex");
        if (validate)
            check();
    }

    static SMap identity(const SSet& x)
    {
        std::vector<Simplex> im;
        for (std::uint32_t id = 0; id < x.size(); ++id)
            im.push_back(x.simplex(id));
        return SMap(x, x, std::move(im), false);
    }

    /// The unique map out of the empty simplicial set.
    static SMap from_empty(const SSet& target) { return SMap(SSet(), target, {}, false); }

    const SSet& source() const { return source_; }
    const SSet& target() const { return target_; }
    const std::vector<Simplex>& images() const { return images_; }
    const Simplex& at(std::uint32_t id) const { return images_[id]; }

    Simplex operator()(const Simplex& s) const { return images_[s.base].degenerate(s.degen); }

    /// Bijective on nondegenerate simplices and never degenerates.
    bool is_isomorphism() const
    {
        if (source_.size() != target_.size())
            return false;
        std::vector<bool> hit(target_.size(), false);
        for (auto const& im : images_) {
            if (!im.nondegenerate() || hit[im.base])
                return false;
            hit[im.base] = true;
        }
        return true;
    }

    bool is_injective() const
    {
        std::vector<bool> hit(target_.size(), false);
        for (auto const& im : images_) {
            if (!im.nondegenerate() || hit[im.base])
                return false;
            hit[im.base] = true;
        }
        return true;
    }

    friend bool operator==(const SMap& a, const SMap& b) { return a.images_ == b.images_; }

  private:
    void check() const
    {
        for (std::uint32_t id = 0; id < source_.size(); ++id) {
            auto const& im = images_[id];
            if (im.dim() != source_.dim(id) || im.base >= target_.size() ||
                im.degen.back() != target_.dim(im.base))
                throw std::logic_error("SMap image has wrong shape at simplex " + std::to_string(id));
            for (int i = 0; i <= source_.dim(id) && source_.dim(id) > 0; ++i) {
                auto lhs = (*this)(source_.face(source_.simplex(id), i));
                auto rhs = target_.face(im, i);
                if (lhs != rhs)
                    throw std::logic_error("SMap does not commute with face " + std::to_string(i) +
                                           " at simplex " + std::to_string(id));
            }
        }
    }

    SSet source_;
    SSet target_;
    std::vector<Simplex> images_;
};

/// g ∘ f
inline SMap compose(const SMap& g, const SMap& f)
{
    std::vector<Simplex> im;
    im.reserve(f.images().size());
    for (auto const& s : f.images())
        im.push_back(g(s));
    return SMap(f.source(), g.target(), std::move(im), false);
}

/**
 * Binary product X × Y. Nondegenerate simplices are the jointly
 * nondegenerate pairs, enumerated dimension by dimension as lattice paths
 * (shuffles with diagonal steps), lexicographically.
 */
class Product {
  public:
    Product(SSet x, SSet y) : impl_(std::make_shared<Impl>())
    {
        auto& m = *impl_;
        m.x = std::move(x);
        m.y = std::move(y);
        SSetBuilder b(false);
        const int top = std::max(-1, m.x.dimension() + m.y.dimension());
        if (m.x.empty() || m.y.empty()) {
            m.space = b.build();
            return;
        }
        for (int n = 0; n <= top; ++n) {
            for (std::uint32_t xi = 0; xi < m.x.size(); ++xi) {
                const int p = m.x.dim(xi);
                for (std::uint32_t yi = 0; yi < m.y.size(); ++yi) {
                    const int q = m.y.dim(yi);
                    if (n < std::max(p, q) || n > p + q)
                        continue;
                    enumerate_paths(p, q, n, [&](const Surjection& s, const Surjection& t) {
                        Simplex a{xi, s}, c{yi, t};
                        std::vector<Simplex> fs;
                        if (n > 0)
                            for (int i = 0; i <= n; ++i)
                                fs.push_back(pair_in(m, m.x.face(a, i), m.y.face(c, i)));
                        auto id = b.add(n, std::move(fs));
                        m.index.emplace(std::make_tuple(a.base, a.degen, c.base, c.degen), id);
                        m.first.push_back(a);
                        m.second.push_back(c);
                    });
                }
            }
        }
        m.space = b.build();
    }

    const SSet& space() const { return impl_->space; }
    const SSet& left() const { return impl_->x; }
    const SSet& right() const { return impl_->y; }

    /// The product simplex (a, b); a and b must have the same dimension.
    Simplex pair(const Simplex& a, const Simplex& b) const { return pair_in(*impl_, a, b); }

    Simplex first(const Simplex& s) const { return impl_->first[s.base].degenerate(s.degen); }
    Simplex second(const Simplex& s) const { return impl_->second[s.base].degenerate(s.degen); }

    SMap proj1() const
    {
        return SMap(space(), left(), impl_->first, false);
    }
    SMap proj2() const
    {
        return SMap(space(), right(), impl_->second, false);
    }

  private:
    struct Impl {
        SSet x, y, space;
        std::map<std::tuple<std::uint32_t, Surjection, std::uint32_t, Surjection>, std::uint32_t> index;
        std::vector<Simplex> first, second;
    };

    template <class F>
    static void enumerate_paths(int p, int q, int n, F&& f)
    {
        // steps: 0 = advance x, 1 = advance y, 2 = both
        Surjection s{0}, t{0};
        auto rec = [&](auto&& self, int i, int j) -> void {
            const int steps = static_cast<int>(s.size()) - 1;
            if (i == p && j == q) {
                if (steps == n)
                    f(s, t);
                return;
            }
            if (steps >= n)
                return;
            const int moves[3][2] = {{1, 1}, {1, 0}, {0, 1}};
            for (auto const& mv : moves) {
                int ni = i + mv[0], nj = j + mv[1];
                if (ni > p || nj > q)
                    continue;
                s.push_back(static_cast<std::uint8_t>(ni));
                t.push_back(static_cast<std::uint8_t>(nj));
                self(self, ni, nj);
                s.pop_back();
                t.pop_back();
            }
        };
        rec(rec, 0, 0);
    }

    static Simplex pair_in(const Impl& m, const Simplex& a, const Simplex& b)
    {
        const int n = a.dim();
        if (b.dim() != n)
            throw std::invalid_argument("product pair of simplices with different dimensions");
        Surjection rho(static_cast<std::size_t>(n + 1), 0);
        for (int j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const bool collapse = a.degen[uj] == a.degen[uj + 1] && b.degen[uj] == b.degen[uj + 1];
            rho[uj + 1] = static_cast<std::uint8_t>(rho[uj] + (collapse ? 0 : 1));
        }
        const std::size_t k = rho.back();
        Surjection sa(k + 1), sb(k + 1);
        for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j) {
            sa[rho[j]] = a.degen[j];
            sb[rho[j]] = b.degen[j];
        }
        auto it = m.index.find(std::make_tuple(a.base, sa, b.base, sb));
        if (it == m.index.end())
            throw std::logic_error("product simplex lookup failed");
        return {it->second, std::move(rho)};
    }

    std::shared_ptr<Impl> impl_;
};

/// f × g : X × Y -> X' × Y' between the given products.
inline SMap product_map(const SMap& f, const SMap& g, const Product& src, const Product& tgt)
{
    std::vector<Simplex> im;
    for (std::uint32_t id = 0; id < src.space().size(); ++id) {
        auto s = src.space().simplex(id);
        im.push_back(tgt.pair(f(src.first(s)), g(src.second(s))));
    }
    return SMap(src.space(), tgt.space(), std::move(im), false);
}

/**
 * Left-nested product ((X0 × X1) × X2) × ... of a list of factors.
 * One factor gives the factor itself; no factors gives a point.
 */
class ProductN {
  public:
    ProductN() : ProductN(std::vector<SSet>{}) {}
    explicit ProductN(std::vector<SSet> factors) : factors_(std::move(factors))
    {
        if (factors_.empty()) {
            SSetBuilder b;
            b.add_vertex();
            space_ = b.build();
            return;
        }
        space_ = factors_[0];
        for (std::size_t i = 1; i < factors_.size(); ++i) {
            steps_.emplace_back(space_, factors_[i]);
            space_ = steps_.back().space();
        }
    }

    /// Extends a product by one more factor on the right, sharing its steps.
    ProductN(const ProductN& prefix, SSet last) : factors_(prefix.factors_), steps_(prefix.steps_)
    {
        factors_.push_back(std::move(last));
        if (factors_.size() == 1) {
            space_ = factors_[0];
            return;
        }
        steps_.emplace_back(prefix.space(), factors_.back());
        space_ = steps_.back().space();
    }

    const SSet& space() const { return space_; }
    std::size_t arity() const { return factors_.size(); }
    /// The binary product that adds the last factor; needs arity >= 2.
    const Product& last_step() const { return steps_.back(); }
    const std::vector<SSet>& factors() const { return factors_; }

    std::vector<Simplex> components(const Simplex& s) const
    {
        if (factors_.empty())
            return {};
        std::vector<Simplex> out(factors_.size());
        Simplex cur = s;
        for (std::size_t i = steps_.size(); i-- > 0;) {
            out[i + 1] = steps_[i].second(cur);
            cur = steps_[i].first(cur);
        }
        out[0] = cur;
        return out;
    }

    Simplex tuple(const std::vector<Simplex>& comps) const
    {
        if (comps.size() != factors_.size())
            throw std::invalid_argument("tuple arity mismatch");
        if (factors_.empty())
            throw std::invalid_argument("tuple of an empty product needs a dimension");
        Simplex cur = comps[0];
        for (std::size_t i = 0; i < steps_.size(); ++i)
            cur = steps_[i].pair(cur, comps[i + 1]);
        return cur;
    }

    /// Tuple for the nullary product: the point in dimension `dim`.
    Simplex point(int dim) const { return {0, constant_surjection(dim)}; }

  private:
    std::vector<SSet> factors_;
    std::vector<Product> steps_;
    SSet space_;
};

/// Componentwise map between two products of equal arity.
inline SMap product_map(const std::vector<SMap>& fs, const ProductN& src, const ProductN& tgt)
{
    std::vector<Simplex> im;
    for (std::uint32_t id = 0; id < src.space().size(); ++id) {
        auto s = src.space().simplex(id);
        if (fs.empty()) {
            im.push_back(tgt.point(s.dim()));
            continue;
        }
        auto c = src.components(s);
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = fs[i](c[i]);
        im.push_back(tgt.tuple(c));
    }
    return SMap(src.space(), tgt.space(), std::move(im), false);
}

// ---------------------------------------------------------------------------
// Basic constructors
// ---------------------------------------------------------------------------

inline SSet empty_sset() { return SSet(); }

inline SSet point()
{
    SSetBuilder b;
    b.add_vertex();
    return b.build();
}

/// Discrete simplicial set on `n` points.
inline SSet points(std::size_t n)
{
    SSetBuilder b;
    for (std::size_t i = 0; i < n; ++i)
        b.add_vertex();
    return b.build();
}

/// Standard 1-simplex: vertices 0, 1 and the edge 0 -> 1.
inline SSet interval()
{
    SSetBuilder b;
    b.add_vertex();
    b.add_vertex();
    b.add_nd(1, {1, 0});
    return b.build();
}

/**
 * Circle as a closed polygon. Vertex j is simplex j, edge j is simplex k+j
 * and joins vertex j with vertex j+1 (mod k); `forward[j]` makes it point
 * from j to j+1.
 */
inline SSet polygon(const std::vector<bool>& forward)
{
    const auto k = static_cast<std::uint32_t>(forward.size());
    if (k == 0)
        throw std::invalid_argument("polygon needs at least one edge");
    SSetBuilder b;
    for (std::uint32_t j = 0; j < k; ++j)
        b.add_vertex();
    for (std::uint32_t j = 0; j < k; ++j) {
        std::uint32_t from = j, to = (j + 1) % k;
        if (!forward[j])
            std::swap(from, to);
        b.add_nd(1, {to, from});
    }
    return b.build();
}

/// Orientation of the boundary of the standard triangle, read around the cycle.
inline std::vector<bool> triangle_orientation() { return {true, true, false}; }

/// Cone over a polygon; the polygon keeps its ids, the apex is 2k, spoke j is
/// 2k+1+j, and the triangle over edge j is 3k+1+j.
inline SSet polygon_cone(const std::vector<bool>& forward)
{
    const auto k = static_cast<std::uint32_t>(forward.size());
    if (k == 0)
        throw std::invalid_argument("polygon needs at least one edge");
    SSetBuilder b;
    for (std::uint32_t j = 0; j < k; ++j)
        b.add_vertex();
    for (std::uint32_t j = 0; j < k; ++j) {
        std::uint32_t from = j, to = (j + 1) % k;
        if (!forward[j])
            std::swap(from, to);
        b.add_nd(1, {to, from});
    }
    const std::uint32_t apex = b.add_vertex();
    for (std::uint32_t j = 0; j < k; ++j)
        b.add_nd(1, {apex, j});
    for (std::uint32_t j = 0; j < k; ++j) {
        std::uint32_t from = j, to = (j + 1) % k;
        if (!forward[j])
            std::swap(from, to);
        // (from, to, apex): d0 = (to, apex), d1 = (from, apex), d2 = edge
        b.add_nd(2, {apex + 1 + to, apex + 1 + from, k + j});
    }
    return b.build();
}

/// Model of S^(n-1) for n-1 in {-1, 0, 1}; sphere(-1) is empty.
inline SSet sphere(int n)
{
    switch (n) {
    case -1: return empty_sset();
    case 0: return points(2);
    case 1: return polygon(triangle_orientation());
    default: throw Error(ErrorKind::UnsupportedDimension, "sphere(" + std::to_string(n) + ")");
    }
}

/// Cone model of D^n for n <= 2; sphere(n-1) sits inside with the same ids.
inline SSet disk(int n)
{
    switch (n) {
    case 0: return point();
    case 1: return interval();
    case 2: return polygon_cone(triangle_orientation());
    default: throw Error(ErrorKind::UnsupportedDimension, "disk(" + std::to_string(n) + ")");
    }
}

/// Inclusion of the boundary sphere: ids are preserved by construction.
inline SMap boundary_inclusion(const SSet& sph, const SSet& dsk)
{
    std::vector<Simplex> im;
    for (std::uint32_t id = 0; id < sph.size(); ++id)
        im.push_back(dsk.simplex(id));
    return SMap(sph, dsk, std::move(im));
}

/// The map sending everything to vertex `v` of the target.
inline SMap constant_map(const SSet& src, const SSet& tgt, std::uint32_t v)
{
    std::vector<Simplex> im;
    for (std::uint32_t id = 0; id < src.size(); ++id)
        im.push_back({v, constant_surjection(src.dim(id))});
    return SMap(src, tgt, std::move(im), false);
}

/// Connected components of the 1-skeleton; returns a component id per vertex
/// (components numbered by smallest vertex id) and the component count.
inline std::pair<std::vector<std::uint32_t>, std::uint32_t> vertex_components(const SSet& x)
{
    std::vector<std::uint32_t> parent(x.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t a) {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    };
    for (auto e : x.of_dim(1)) {
        auto f = x.faces(e);
        auto a = find(f[0].base), b = find(f[1].base);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::uint32_t> comp(x.size(), 0);
    std::map<std::uint32_t, std::uint32_t> label;
    for (auto v : x.of_dim(0)) {
        auto r = find(v);
        auto it = label.find(r);
        if (it == label.end())
            it = label.emplace(r, static_cast<std::uint32_t>(label.size())).first;
        comp[v] = it->second;
    }
    return {comp, static_cast<std::uint32_t>(label.size())};
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

namespace detail {

struct IsoSearch {
    const SSet& x;
    const SSet& y;
    std::vector<std::int64_t> fwd, bwd;
    std::vector<std::vector<std::uint32_t>> cofaces_x, cofaces_y;

    IsoSearch(const SSet& a, const SSet& b) : x(a), y(b), fwd(a.size(), -1), bwd(b.size(), -1)
    {
        cofaces_x = cofaces(x);
        cofaces_y = cofaces(y);
    }

    static std::vector<std::vector<std::uint32_t>> cofaces(const SSet& s)
    {
        std::vector<std::vector<std::uint32_t>> c(s.size());
        for (std::uint32_t id = 0; id < s.size(); ++id)
            for (auto const& f : s.faces(id))
                c[f.base].push_back(id);
        return c;
    }

    std::tuple<int, std::size_t, std::vector<Surjection>> signature(const SSet& s,
                                                                    const std::vector<std::vector<std::uint32_t>>& cf,
                                                                    std::uint32_t id) const
    {
        std::vector<Surjection> pattern;
        for (auto const& f : s.faces(id))
            pattern.push_back(f.degen);
        return {s.dim(id), cf[id].size(), pattern};
    }

    // Assign a -> b and propagate through faces; records the trail for undo.
    bool assign(std::uint32_t a, std::uint32_t b, std::vector<std::uint32_t>& trail)
    {
        if (fwd[a] >= 0)
            return fwd[a] == b;
        if (bwd[b] >= 0)
            return false;
        if (signature(x, cofaces_x, a) != signature(y, cofaces_y, b))
            return false;
        fwd[a] = b;
        bwd[b] = a;
        trail.push_back(a);
        auto fa = x.faces(a);
        auto fb = y.faces(b);
        for (std::size_t i = 0; i < fa.size(); ++i) {
            if (fa[i].degen != fb[i].degen)
                return false;
            if (!assign(fa[i].base, fb[i].base, trail))
                return false;
        }
        return true;
    }

    void undo(std::vector<std::uint32_t>& trail, std::size_t mark)
    {
        while (trail.size() > mark) {
            auto a = trail.back();
            trail.pop_back();
            bwd[static_cast<std::size_t>(fwd[a])] = -1;
            fwd[a] = -1;
        }
    }

    bool search(const std::vector<std::uint32_t>& order, std::size_t pos, std::vector<std::uint32_t>& trail)
    {
        while (pos < order.size() && fwd[order[pos]] >= 0)
            ++pos;
        if (pos == order.size())
            return true;
        const auto a = order[pos];
        for (auto b : y.of_dim(x.dim(a))) {
            if (bwd[b] >= 0)
                continue;
            auto mark = trail.size();
            if (assign(a, b, trail) && search(order, pos + 1, trail))
                return true;
            undo(trail, mark);
        }
        return false;
    }
};

}  // namespace detail

/**
 * Finds an isomorphism X -> Y if one exists. Simplices are matched top-down
 * (faces are forced by their cofaces) with backtracking on the free choices,
 * pruned by (dimension, coface count, face degeneracy pattern).
 */
inline std::optional<SMap> find_isomorphism(const SSet& x, const SSet& y)
{
    if (x.size() != y.size() || x.dimension() != y.dimension())
        return std::nullopt;
    for (int d = 0; d <= x.dimension(); ++d)
        if (x.count(d) != y.count(d))
            return std::nullopt;
    detail::IsoSearch s(x, y);
    std::vector<std::uint32_t> order;
    for (int d = x.dimension(); d >= 0; --d)
        for (auto id : x.of_dim(d))
            order.push_back(id);
    std::vector<std::uint32_t> trail;
    if (!s.search(order, 0, trail))
        return std::nullopt;
    std::vector<Simplex> im;
    for (std::uint32_t id = 0; id < x.size(); ++id)
        im.push_back(y.simplex(static_cast<std::uint32_t>(s.fwd[id])));
    return SMap(x, y, std::move(im));
}

inline bool isomorphic(const SSet& x, const SSet& y) { return find_isomorphism(x, y).has_value(); }

}  // namespace dihoto
