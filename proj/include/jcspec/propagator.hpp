#pragma once

#include "jcspec/liouvillian.hpp"

namespace jcspec {

/// Advances vectors under dv/dt = L v by a fixed output step.
///
/// The step is reused many times (two-time correlations, long propagations),
/// so the substep count and the Taylor/RK setup are computed once.
class Propagator {
public:
    Propagator(const SparseGenerator& generator, double step, PropagationOptions options = {});

    double step_size() const { return step_; }

    /// v <- exp(L step) v.
    void advance(Vector& v) const;
    /// v <- exp(L duration) v for an arbitrary duration (used for a final
    /// partial step).
    void advance(Vector& v, double duration) const;

private:
    void taylor(Vector& v, double duration) const;
    void dormand_prince(Vector& v, double duration) const;

    SparseGenerator generator_;
    double step_;
    PropagationOptions options_;
    double norm1_;
};

}  // namespace jcspec
