#include "crnlyap/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "crnlyap/lp.hpp"
#include "crnlyap/network.hpp"

namespace crnlyap {

void parallel_for(int count, const std::function<void(int)>& fn) {
    int workers = int(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CRNLYAP_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) workers = v;
    }
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<int> Partition::switched_rows(int k) const {
    std::vector<int> rows;
    for (const Neighbor& n : neighbors)
        if (n.k == k) rows.push_back(n.switched);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

std::optional<int> Partition::switched_row(int k, int j) const {
    for (const Neighbor& n : neighbors)
        if (n.k == k && n.j == j) return n.switched;
    return std::nullopt;
}

namespace {

// Lexicographic with +1 before -1.
bool sig_less(const std::vector<int>& a, const std::vector<int>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

}  // namespace

Partition build_partition(const Mat& H, const Mat* check_kernel_against,
                          int max_reduced_rows) {
    const int p = H.rows();
    if (p == 0) throw std::invalid_argument("empty partition matrix");
    Partition part;
    part.H = H;

    for (int i = 0; i < p; ++i) {
        Vec h = H.row(i);
        if (is_zero_vec(h)) throw std::invalid_argument("zero row in partition matrix");
        Vec canon = primitive(h);
        int s = 0;
        for (int j = 0; j < H.cols(); ++j)
            if (!is_zero(h[j])) { s = sign(h[j]) * sign(canon[j]); break; }
        int idx = -1;
        for (int t = 0; t < part.reduced.rows(); ++t)
            if (part.reduced.row(t) == canon) { idx = t; break; }
        if (idx < 0) {
            idx = part.reduced.rows();
            part.reduced.append_row(canon);
        }
        part.row_to_reduced.push_back(idx);
        part.row_sign.push_back(s);
    }
    const int pt = part.reduced.rows();
    if (pt > max_reduced_rows)
        throw std::invalid_argument("partition matrix has " + std::to_string(pt) +
                                    " distinct row directions (cap " +
                                    std::to_string(max_reduced_rows) + ")");

    if (check_kernel_against && !kernel_equal(H, *check_kernel_against))
        throw std::invalid_argument("ker H differs from the requested kernel");

    part.mu = positive_vector_in_kernel(H);

    // One strict-interior LP per reduced signature; opposite signatures share
    // a verdict, so only masks with sign +1 on row 0 are solved.
    const std::uint64_t total = std::uint64_t(1) << (pt - 1);
    std::vector<std::optional<Vec>> witness;
    witness.resize(size_t(total));
    parallel_for(int(total), [&](int m) {
        Mat M = part.reduced;
        for (int t = 1; t < pt; ++t)
            if (m >> (pt - 1 - t) & 1)
                for (int j = 0; j < M.cols(); ++j) M(t, j) = -M(t, j);
        witness[size_t(m)] = strict_cone_interior(M);
    });

    std::vector<std::pair<std::vector<int>, Vec>> half;
    for (std::uint64_t m = 0; m < total; ++m) {
        if (!witness[size_t(m)]) continue;
        std::vector<int> sig(pt, 1);
        for (int t = 1; t < pt; ++t)
            if (m >> (pt - 1 - t) & 1) sig[t] = -1;
        half.emplace_back(std::move(sig), std::move(*witness[size_t(m)]));
    }
    std::sort(half.begin(), half.end(),
              [](const auto& a, const auto& b) { return sig_less(a.first, b.first); });

    const int m_half = int(half.size());
    part.regions.resize(size_t(2) * m_half);
    for (int k = 0; k < m_half; ++k) {
        Region r;
        r.index = k;
        r.reduced_signature = half[k].first;
        r.interior_witness = half[k].second;
        r.signature.resize(p);
        for (int i = 0; i < p; ++i)
            r.signature[i] = part.row_sign[i] * r.reduced_signature[part.row_to_reduced[i]];
        Region opp;
        opp.index = 2 * m_half - 1 - k;
        opp.reduced_signature.resize(pt);
        for (int t = 0; t < pt; ++t) opp.reduced_signature[t] = -r.reduced_signature[t];
        opp.signature.resize(p);
        for (int i = 0; i < p; ++i) opp.signature[i] = -r.signature[i];
        opp.interior_witness = -r.interior_witness;
        part.regions[size_t(k)] = std::move(r);
        part.regions[size_t(opp.index)] = std::move(opp);
    }

    for (int k = 0; k < part.num_regions(); ++k)
        for (int j = 0; j < part.num_regions(); ++j) {
            if (k == j) continue;
            int diff = -1, count = 0;
            for (int t = 0; t < pt && count < 2; ++t)
                if (part.regions[k].reduced_signature[t] !=
                    part.regions[j].reduced_signature[t]) {
                    diff = t;
                    ++count;
                }
            if (count == 1) part.neighbors.push_back({k, j, diff});
        }
    return part;
}

std::vector<int> locate(const Partition& partition, const Vec& r) {
    Vec hr = mat_vec(partition.H, r);
    std::vector<int> hits;
    for (const Region& reg : partition.regions) {
        bool inside = true;
        for (int i = 0; i < int(hr.size()); ++i)
            if (sign(hr[i]) * reg.signature[i] < 0) { inside = false; break; }
        if (inside) hits.push_back(reg.index);
    }
    return hits;
}

RefinedPartition refine_with_sign_regions(const Mat& gamma, const Mat& hhat) {
    for (const Vec& v : kernel_basis(gamma))
        if (hhat.rows() && !is_zero_vec(mat_vec(hhat, v)))
            throw std::invalid_argument("ker Gamma not contained in ker Hhat");
    Mat H = gamma;
    for (int i = 0; i < hhat.rows(); ++i) H.append_row(hhat.row(i));

    RefinedPartition out;
    out.sign_regions = build_partition(gamma);
    out.partition = hhat.rows() ? build_partition(H) : out.sign_regions;

    const int n = gamma.rows();
    for (const Region& reg : out.partition.regions) {
        int q = -1;
        for (const Region& s : out.sign_regions.regions) {
            bool match = true;
            for (int i = 0; i < n; ++i)
                if (s.signature[i] != reg.signature[i]) { match = false; break; }
            if (match) { q = s.index; break; }
        }
        if (q < 0) throw std::logic_error("refined region not inside a sign region");
        out.q.push_back(q);
    }
    return out;
}

}  // namespace crnlyap
