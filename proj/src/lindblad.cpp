#include "cavnet/lindblad.hpp"

#include <cmath>

namespace cavnet {

namespace {

bool is_hop_layout(const HilbertLayout& layout) {
    return layout.subsystems() == 3 && layout.dim(0) == 2 && layout.dim(2) == 2 &&
           layout.dim(1) >= 2;
}

// Preallocated scratch for the inner loop.
struct Workspace {
    CMat h, ax, t1, k1, k2, k3, k4, xs;
    explicit Workspace(Eigen::Index d)
        : h(d, d), ax(d, d), t1(d, d), k1(d, d), k2(d, d), k3(d, d), k4(d, d), xs(d, d) {}
};

struct Dissipator {
    CMat l, ldagl;
    double rate;
};

void rhs_into(const CMat& x, const CMat& h, const std::vector<Dissipator>& diss, CMat& out,
              CMat& ax, CMat& t1) {
    const Complex mi(0.0, -1.0);
    ax.noalias() = h * x;
    out = mi * ax;
    ax.noalias() = x * h;
    out += Complex(0.0, 1.0) * ax;
    for (const auto& d : diss) {
        ax.noalias() = d.l * x;
        t1.noalias() = ax * d.l.adjoint();
        out += d.rate * t1;
        t1.noalias() = d.ldagl * x;
        out -= (0.5 * d.rate) * t1;
        t1.noalias() = x * d.ldagl;
        out -= (0.5 * d.rate) * t1;
    }
}

} // namespace

CMat build_hamiltonian(double g_a, double g_b, const HilbertLayout& layout) {
    if (!is_hop_layout(layout))
        throw ValidationError("build_hamiltonian: layout must be (qubit, cavity, qubit)");
    const CMat a = annihilation(layout.dim(1));
    const CMat sA_p = embed(sigma_plus(), layout, 0);
    const CMat sB_p = embed(sigma_plus(), layout, 2);
    const CMat c = embed(a, layout, 1);
    CMat h = g_a * (sA_p * c) + g_b * (sB_p * c);
    h += h.adjoint().eval();
    return h;
}

CMat lindblad_rhs(const CMat& rho, const CMat& h, const std::vector<CollapseOp>& collapse) {
    if (rho.rows() != rho.cols() || h.rows() != rho.rows())
        throw ValidationError("lindblad_rhs: dimension mismatch");
    const Complex mi(0.0, -1.0);
    CMat out = mi * (h * rho - rho * h);
    for (const auto& c : collapse) {
        if (c.op.rows() != rho.rows()) throw ValidationError("lindblad_rhs: collapse op dimension mismatch");
        const CMat ldagl = c.op.adjoint() * c.op;
        out += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (ldagl * rho + rho * ldagl));
    }
    return out;
}

void rk4_evolve(const LindbladGenerator& gen, CMat& x, double t0, double t1, double dt,
                const std::function<void(double, const CMat&)>& per_step, bool trace_control) {
    if (dt <= 0) throw ValidationError("rk4_evolve: dt must be positive");
    const Eigen::Index d = x.rows();
    Workspace w(d);

    std::vector<Dissipator> diss;
    diss.reserve(gen.collapse.size());
    for (const auto& c : gen.collapse) {
        if (c.rate < 0) throw ValidationError("rk4_evolve: negative collapse rate");
        if (c.rate > 0) diss.push_back({c.op, c.op.adjoint() * c.op, c.rate});
    }

    const long n_steps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-12)));
    const double h_step = (t1 - t0) / n_steps;

    auto hamiltonian_at = [&](double t, CMat& h) {
        const double ga = gen.g_a_of_t ? gen.g_a_of_t(t) : 0.0;
        const double gb = gen.g_b_of_t ? gen.g_b_of_t(t) : 0.0;
        h = ga * gen.h_a + gb * gen.h_b;
    };

    double t = t0;
    for (long s = 0; s < n_steps; ++s) {
        hamiltonian_at(t, w.h);
        rhs_into(x, w.h, diss, w.k1, w.ax, w.t1);

        hamiltonian_at(t + 0.5 * h_step, w.h);
        w.xs = x + (0.5 * h_step) * w.k1;
        rhs_into(w.xs, w.h, diss, w.k2, w.ax, w.t1);

        w.xs = x + (0.5 * h_step) * w.k2;
        rhs_into(w.xs, w.h, diss, w.k3, w.ax, w.t1);

        hamiltonian_at(t + h_step, w.h);
        w.xs = x + h_step * w.k3;
        rhs_into(w.xs, w.h, diss, w.k4, w.ax, w.t1);

        x += (h_step / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
        t = t0 + (s + 1) * h_step;

        if (trace_control) {
            const double tr = x.trace().real();
            const double drift = std::abs(tr - 1.0);
            if (drift > 1e-6)
                throw NumericalAccuracyError(
                    "rk4_evolve: trace drift exceeded 1e-6; use a smaller dt");
            if (drift <= 1e-8 && tr != 0.0) x /= tr;
        }
        if (per_step) per_step(t, x);
    }
}

double default_dt(const PulseSchedule& schedule, const PhysicalParams& params, double span_us) {
    double dt = span_us / 20000.0;
    const double gmax = schedule.max_coupling();
    if (gmax > 0) dt = std::min(dt, 0.02 / gmax);
    const double rate = std::max(params.kappa, params.gamma0);
    if (rate > 0) dt = std::min(dt, 0.01 / rate);
    if (schedule.kind == PulseSchedule::Kind::GaussianStirap)
        dt = std::min(dt, schedule.width_t_us / 50.0);
    return dt;
}

std::vector<CollapseOp> hop_collapse_ops(const HilbertLayout& layout, const PhysicalParams& params) {
    if (!is_hop_layout(layout))
        throw ValidationError("hop_collapse_ops: layout must be (qubit, cavity, qubit)");
    std::vector<CollapseOp> ops;
    ops.push_back({embed(sigma_minus(), layout, 0), params.gamma0});
    ops.push_back({embed(sigma_minus(), layout, 2), params.gamma0});
    ops.push_back({embed(annihilation(layout.dim(1)), layout, 1), params.kappa});
    return ops;
}

Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& schedule,
                  const PhysicalParams& params, double t_span_us, double dt_us,
                  int store_points) {
    schedule.check();
    params.check();
    if (t_span_us <= 0) throw ValidationError("evolve: t_span must be positive");
    if (!is_hop_layout(rho0.layout))
        throw ValidationError("evolve: state layout must be (qubit, cavity, qubit)");

    const double dt = dt_us > 0 ? dt_us : default_dt(schedule, params, t_span_us);

    LindbladGenerator gen;
    gen.h_a = build_hamiltonian(1.0, 0.0, rho0.layout);
    gen.h_b = build_hamiltonian(0.0, 1.0, rho0.layout);
    gen.collapse = hop_collapse_ops(rho0.layout, params);
    gen.g_a_of_t = [&schedule](double t) { return schedule.coupling_a(t); };
    gen.g_b_of_t = [&schedule](double t) { return schedule.coupling_b(t); };

    const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_span_us / dt - 1e-12)));
    const long stride = std::max(1L, n_steps / std::max(1, store_points));

    Trajectory traj;
    traj.times_us.push_back(0.0);
    traj.states.push_back(rho0);

    CMat x = rho0.entries;
    long step = 0;
    rk4_evolve(
        gen, x, 0.0, t_span_us, dt,
        [&](double t, const CMat& state) {
            ++step;
            if (step % stride == 0 || t >= t_span_us) {
                traj.times_us.push_back(t);
                traj.states.push_back(DensityMatrix(rho0.layout, state));
            }
        },
        /*trace_control=*/true);
    return traj;
}

} // namespace cavnet
