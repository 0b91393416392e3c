#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "qpac/qmath.hpp"

namespace qpac {

// A channel restricted to computational basis inputs: an explicit output table
// with one density matrix per input label 0..d1-1, all of common dimension d2.
class ChannelConcept {
public:
    ChannelConcept(int in_dim, std::vector<DensityMatrix> outputs)
        : in_dim_(in_dim), outputs_(std::move(outputs)) {
        if (in_dim_ < 1 || outputs_.size() != static_cast<std::size_t>(in_dim_))
            throw InvalidParams("concept needs one output per basis input");
        for (const auto& o : outputs_)
            if (o.dim() != outputs_[0].dim())
                throw DimMismatch("concept outputs have mixed dimensions");
    }

    // constant concept: same output on every input
    static ChannelConcept constant(int in_dim, const DensityMatrix& out) {
        return ChannelConcept(in_dim, std::vector<DensityMatrix>(in_dim, out));
    }

    int in_dim() const { return in_dim_; }
    Eigen::Index out_dim() const { return outputs_[0].dim(); }
    const DensityMatrix& output(int x) const { return outputs_.at(x); }
    const std::vector<DensityMatrix>& outputs() const { return outputs_; }

private:
    int in_dim_;
    std::vector<DensityMatrix> outputs_;
};

class ConceptClass {
public:
    explicit ConceptClass(std::vector<ChannelConcept> concepts)
        : concepts_(std::move(concepts)) {
        if (concepts_.empty()) throw EmptySet("concept class is empty");
        for (const auto& c : concepts_)
            if (c.in_dim() != concepts_[0].in_dim() || c.out_dim() != concepts_[0].out_dim())
                throw DimMismatch("concept class has mixed dimensions");
    }

    std::size_t size() const { return concepts_.size(); }
    int in_dim() const { return concepts_[0].in_dim(); }
    Eigen::Index out_dim() const { return concepts_[0].out_dim(); }
    const ChannelConcept& operator[](std::size_t i) const { return concepts_[i]; }

private:
    std::vector<ChannelConcept> concepts_;
};

struct InputDistribution {
    ProbVector weights;

    explicit InputDistribution(ProbVector w) : weights(std::move(w)) {}
    static InputDistribution uniform(int d1) { return InputDistribution(ProbVector::uniform(d1)); }
};

// Delta(c1, c2) = E_{x~D}[ trace_distance(c1(x), c2(x)) ], evaluated exactly.
inline double concept_distance(const ChannelConcept& c1, const ChannelConcept& c2,
                               const InputDistribution& d) {
    if (c1.in_dim() != c2.in_dim() || c1.out_dim() != c2.out_dim())
        throw DimMismatch("concept_distance dimension mismatch");
    if (d.weights.size() != static_cast<std::size_t>(c1.in_dim()))
        throw DimMismatch("input distribution length mismatch");
    double sum = 0.0;
    for (int x = 0; x < c1.in_dim(); ++x)
        sum += d.weights[x] * trace_distance(c1.output(x), c2.output(x));
    return sum;
}

inline RealMatrix distance_matrix(const ConceptClass& c, const InputDistribution& d) {
    std::size_t n = c.size();
    RealMatrix m = RealMatrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = m(j, i) = concept_distance(c[i], c[j], d);
    return m;
}

// F(S1, S2) = max pairwise fidelity
inline double set_fidelity(const std::vector<DensityMatrix>& s1,
                           const std::vector<DensityMatrix>& s2) {
    if (s1.empty() || s2.empty()) throw EmptySet("set_fidelity on empty set");
    double best = 0.0;
    for (const auto& a : s1)
        for (const auto& b : s2) best = std::max(best, fidelity(a, b));
    return best;
}

// One sample from the oracle: the input label and output dimension are public,
// the output state itself is only consumable through SampleOracle::measure.
class HiddenStateHandle {
public:
    int x() const { return x_; }
    Eigen::Index dim() const { return dim_; }

private:
    friend class SampleOracle;
    HiddenStateHandle(std::uint64_t id, int x, Eigen::Index dim) : id_(id), x_(x), dim_(dim) {}
    std::uint64_t id_;
    int x_;
    Eigen::Index dim_;
};

// The sample oracle O_{c*,D}. The target index and the input distribution are
// private; the learner-facing surface exposes only input labels, dimensions and
// measurement outcomes. Stateful and single-threaded.
class SampleOracle {
public:
    SampleOracle(std::shared_ptr<const ConceptClass> cls, std::size_t target_index,
                 InputDistribution d, std::uint64_t seed,
                 long long dim_cap = DIM_CAP_DEFAULT)
        : class_(std::move(cls)), target_(target_index), dist_(std::move(d)),
          rng_(seed), dim_cap_(dim_cap) {
        if (target_ >= class_->size()) throw InvalidParams("target index out of range");
        if (dist_.weights.size() != static_cast<std::size_t>(class_->in_dim()))
            throw DimMismatch("input distribution length mismatch");
    }

    Eigen::Index out_dim() const { return class_->out_dim(); }
    long long dim_cap() const { return dim_cap_; }

    std::vector<HiddenStateHandle> draw(std::size_t count) {
        std::vector<HiddenStateHandle> handles;
        handles.reserve(count);
        for (std::size_t t = 0; t < count; ++t) {
            int x = static_cast<int>(sample_index(dist_.weights, rng_));
            std::uint64_t id = next_id_++;
            slots_.push_back(Slot{x, false});
            draw_log_.push_back(x);
            handles.push_back(HiddenStateHandle(id, x, class_->out_dim()));
        }
        return handles;
    }

    // Measures M on the tensor product of the hidden states behind the handles
    // (in the given order) and consumes them all.
    std::size_t measure(const std::vector<HiddenStateHandle>& handles, const Povm& m) {
        if (handles.empty()) throw EmptySet("measure needs at least one handle");
        long long joint = 1;
        for (const auto& h : handles) {
            const Slot& s = slot(h);
            if (s.consumed) throw HandleConsumed();
            joint *= class_->out_dim();
            if (joint > dim_cap_) throw DimCapExceeded(joint, dim_cap_);
        }
        if (m.dim() != joint) throw DimMismatch("POVM dimension does not match joint state");
        ComplexMatrix state = (*class_)[target_].output(slot(handles[0]).x).mat();
        for (std::size_t i = 1; i < handles.size(); ++i)
            state = kron(state, (*class_)[target_].output(slot(handles[i]).x).mat());
        for (const auto& h : handles) slot(h).consumed = true;
        return sample_outcome(DensityMatrix::trusted(std::move(state)), m, rng_);
    }

    std::size_t samples_drawn() const { return draw_log_.size(); }

    // audit access for the harness; not part of the learner-facing surface
    const std::vector<int>& audit_draw_log() const { return draw_log_; }

private:
    struct Slot {
        int x;
        bool consumed;
    };

    Slot& slot(const HiddenStateHandle& h) {
        if (h.id_ >= slots_.size()) throw InvalidParams("foreign handle");
        return slots_[h.id_];
    }

    std::shared_ptr<const ConceptClass> class_;
    std::size_t target_;
    InputDistribution dist_;
    Rng rng_;
    long long dim_cap_;
    std::uint64_t next_id_ = 0;
    std::vector<Slot> slots_;
    std::vector<int> draw_log_;
};

}  // namespace qpac
