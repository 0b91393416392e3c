#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qpac/channels.hpp"

namespace qpac {

struct GenParams {
    int n = 4;        // number of concepts
    int d1 = 1;       // input labels
    int d2 = 2;       // output dimension
    double step = 0.1;     // string: consecutive trace distance
    int clusters = 2;      // clustered: number of clusters
    double spread = 0.05;  // clustered: in-cluster mixing weight
    int rank = 0;          // random_mixed: Wishart rank (0 = full)
    std::vector<DensityMatrix> states;  // constant_set
};

inline ComplexVector random_pure_vector(Eigen::Index d, Rng& rng) {
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = std::complex<double>(rng.normal(), rng.normal());
    return v / v.norm();
}

inline DensityMatrix random_pure_state(Eigen::Index d, Rng& rng) {
    return DensityMatrix::pure(random_pure_vector(d, rng));
}

// normalized Wishart state G G^dag / tr, G a d x rank complex Gaussian
inline DensityMatrix random_mixed_state(Eigen::Index d, int rank, Rng& rng) {
    if (rank <= 0) rank = static_cast<int>(d);
    ComplexMatrix g(d, rank);
    for (int j = 0; j < rank; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    ComplexMatrix w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix::trusted(0.5 * (w + w.adjoint().eval()));
}

struct GeneratedClass {
    ConceptClass concepts;
    InputDistribution inputs;
};

// Concept-class generators. "string" realizes the pathology of states that are
// all close to their neighbors while the endpoints are far apart; "clustered"
// makes tight clusters that exercise the partition's extreme path.
inline GeneratedClass gen_class(const std::string& kind, const GenParams& p, Rng& rng) {
    if (p.n < 1 || p.d1 < 1 || p.d2 < 1) throw InvalidParams("gen_class needs positive sizes");
    std::vector<ChannelConcept> concepts;

    if (kind == "random_pure") {
        for (int i = 0; i < p.n; ++i) {
            std::vector<DensityMatrix> outs;
            for (int x = 0; x < p.d1; ++x) outs.push_back(random_pure_state(p.d2, rng));
            concepts.push_back(ChannelConcept(p.d1, std::move(outs)));
        }
    } else if (kind == "random_mixed") {
        for (int i = 0; i < p.n; ++i) {
            std::vector<DensityMatrix> outs;
            for (int x = 0; x < p.d1; ++x) outs.push_back(random_mixed_state(p.d2, p.rank, rng));
            concepts.push_back(ChannelConcept(p.d1, std::move(outs)));
        }
    } else if (kind == "string") {
        if (p.d2 < 2) throw InvalidParams("string generator needs d2 >= 2");
        if (p.step <= 0.0 || p.step >= 1.0) throw InvalidParams("string step must be in (0, 1)");
        // constant concepts along the geodesic between |0> and |1>; pure-state
        // trace distance |sin(theta_i - theta_j)| makes neighbors step apart
        double dtheta = std::asin(p.step);
        for (int i = 0; i < p.n; ++i) {
            double theta = i * dtheta;
            ComplexVector v = ComplexVector::Zero(p.d2);
            v[0] = std::cos(theta);
            v[1] = std::sin(theta);
            concepts.push_back(ChannelConcept::constant(p.d1, DensityMatrix::pure(v)));
        }
    } else if (kind == "clustered") {
        if (p.clusters < 1 || p.clusters > p.n) throw InvalidParams("bad cluster count");
        if (p.spread < 0.0 || p.spread > 1.0) throw InvalidParams("spread must be in [0, 1]");
        std::vector<DensityMatrix> centers;
        for (int k = 0; k < p.clusters; ++k)
            centers.push_back(random_mixed_state(p.d2, p.rank, rng));
        for (int i = 0; i < p.n; ++i) {
            const DensityMatrix& center = centers[i % p.clusters];
            std::vector<DensityMatrix> outs;
            for (int x = 0; x < p.d1; ++x) {
                ComplexMatrix m = (1.0 - p.spread) * center.mat() +
                                  p.spread * random_mixed_state(p.d2, p.rank, rng).mat();
                outs.push_back(DensityMatrix::trusted(std::move(m)));
            }
            concepts.push_back(ChannelConcept(p.d1, std::move(outs)));
        }
    } else if (kind == "constant_set") {
        if (p.states.empty()) throw InvalidParams("constant_set needs explicit states");
        for (const auto& st : p.states)
            concepts.push_back(ChannelConcept::constant(p.d1, st));
    } else {
        throw InvalidParams("unknown generator kind: " + kind);
    }
    return GeneratedClass{ConceptClass(std::move(concepts)), InputDistribution::uniform(p.d1)};
}

}  // namespace qpac
