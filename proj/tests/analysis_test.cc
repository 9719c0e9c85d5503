#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.h"
#include "whichpath/analysis.h"
#include "whichpath/eraser.h"
#include "whichpath/errors.h"
#include "whichpath/numeric.h"

using namespace whichpath;
using whichpath::testing::max_abs_diff;
using whichpath::testing::random_complex;
using whichpath::testing::ref_weighted_quantile;
using whichpath::testing::ref_wrap;

namespace {

const ApertureSetup kPoint{1.0, ApertureProfile::point(), 1.0};

DetectorModel ideal_model() {
    return custom_model({{1, 1, 0}, {1, 0, 1}});
}

DetectorModel random_custom(std::mt19937_64 &rng, size_t n) {
    std::uniform_real_distribution<double> uw(0.1, 2.0);
    std::vector<ChannelSpec> ch;
    for (size_t i = 0; i < n; ++i) {
        ch.push_back({uw(rng), random_complex(rng), random_complex(rng)});
    }
    return custom_model(ch);
}

std::vector<double> reconstruct(const DetectorModel &m, const ApertureSetup &setup, const MomentumGrid &g) {
    auto decomp = decompose(m, setup);
    std::vector<double> sum(g.size(), 0.0);
    for (const auto &c : decomp.components) {
        auto cond = conditional_pattern(m, setup, g, c.label);
        for (size_t i = 0; i < g.size(); ++i) {
            sum[i] += c.mass * cond.values[i];
        }
    }
    return sum;
}

Pattern unit(const Pattern &p) {
    return make_pattern(p.grid, p.values, Normalization::unit);
}

}  // namespace

TEST(decompose, single_channel_examples) {
    auto full = decompose(custom_model({{0.7, 1, 1}}), kPoint);
    ASSERT_EQ(full.components.size(), 1u);
    EXPECT_NEAR(full.components[0].visibility, 1.0, 1e-15);
    EXPECT_EQ(full.components[0].phase, 0.0);
    EXPECT_EQ(full.components[0].momentum_transfer, 0.0);
    EXPECT_TRUE(full.components[0].phase_defined);

    auto marker = decompose(custom_model({{0.7, 1, 0}, {0.3, 0, 1}}), kPoint);
    EXPECT_EQ(marker.components[0].visibility, 0.0);
    EXPECT_FALSE(marker.components[0].phase_defined);
}

TEST(decompose, masses_sum_to_one) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        auto d = decompose(random_custom(rng, 1 + t % 7), kPoint);
        double total = 0.0;
        for (const auto &c : d.components) {
            total += c.mass;
            ASSERT_GE(c.visibility, 0.0);
            ASSERT_LE(c.visibility, 1.0 + 1e-12);
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(decompose, micromaser_channels_have_unit_visibility) {
    double L = 10.0, d = 1.0;
    auto m = micromaser_model(L, d, default_cavity_grid(L));
    ApertureSetup setup{d, ApertureProfile::point(), 1.0};
    auto dec = decompose(m, setup);
    for (size_t j = 0; j < dec.components.size(); ++j) {
        const auto &c = dec.components[j];
        if (!c.phase_defined) {
            continue;
        }
        double kL = *c.unwrapped_phase;
        ASSERT_NEAR(c.visibility, 1.0, 1e-12);
        ASSERT_LE(phase_distance(c.phase, kL), 1e-12);
        ASSERT_NEAR(c.momentum_transfer, c.phase / d, 1e-15);
    }
}

TEST(decompose, property_phase_wrap) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ua(-40.0, 40.0);
    for (int t = 0; t < 50; ++t) {
        double alpha = ua(rng);
        ApertureSetup setup{0.5 + t * 0.1, ApertureProfile::point(), 1.0};
        auto d = decompose(custom_model({{1.0, std::polar(1.0, alpha), 1.0}}), setup);
        const auto &c = d.components[0];
        ASSERT_LE(phase_distance(c.phase, ref_wrap(alpha)), 1e-12) << alpha;
        double pd = c.momentum_transfer * setup.separation;
        ASSERT_GT(pd, -kPi);
        ASSERT_LE(pd, kPi);
    }
}

TEST(marginal, ideal_marker_erases_fringes) {
    auto g = MomentumGrid::for_separation(1.0);
    auto fit = fitted_visibility(marginal_pattern(ideal_model(), kPoint, g), kPoint);
    EXPECT_LE(fit.visibility, 1e-3);
}

TEST(marginal, single_channel_is_p0) {
    auto g = MomentumGrid::for_separation(1.0);
    ApertureSetup rect{1.0, ApertureProfile::rectangular(0.2), 1.0};
    auto m = marginal_pattern(custom_model({{1, 1, 1}}), rect, g);
    auto p0 = p0_pattern(single_aperture_amplitude(rect.profile, g), 1.0);
    EXPECT_LE(max_abs_diff(m.values, p0.values), 1e-12 * p0.max());
}

TEST(marginal, heisenberg_fitted_visibility) {
    auto g = MomentumGrid::for_separation(1.0);
    auto at = [&](double x) {
        return fitted_visibility(marginal_pattern(heisenberg_model(x, 0.0, DipoleSpec::isotropic(), 1.0), kPoint, g), kPoint);
    };
    EXPECT_NEAR(at(1.0).visibility, 0.8415, 2e-3);
    EXPECT_NEAR(at(kPi / 2).visibility, 2.0 / kPi, 2e-3);
}

TEST(marginal, property_fitted_visibility_equals_overlap_modulus) {
    std::mt19937_64 rng(77);
    auto g = MomentumGrid::for_separation(1.0);
    for (int t = 0; t < 30; ++t) {
        auto m = random_custom(rng, 1 + t % 5);
        auto fit = fitted_visibility(marginal_pattern(m, kPoint, g), kPoint);
        ASSERT_NEAR(fit.visibility, std::abs(overlap(m)), 2e-3);
    }
}

TEST(conditional, micromaser_node_at_pi_gives_antifringes) {
    double L = 10.0, d = 1.0;
    auto m = micromaser_model(L, d, default_cavity_grid(L));
    // Spacing 0.2 pi / L: node 2005 sits at k = pi / L.
    const auto &ch = m.channels[2005];
    ASSERT_NEAR(*ch.nominal_phase, kPi, 1e-9);
    ApertureSetup setup{d, ApertureProfile::rectangular(0.05), 1.0};
    auto g = MomentumGrid::for_separation(d);
    auto cond = unit(conditional_pattern(m, setup, g, ch.label));
    auto anti = fringe_pattern(single_aperture_amplitude(setup.profile, g), d, 1.0, kPi);
    EXPECT_LE(max_abs_diff(cond.values, anti.values), 1e-9 * anti.max());
}

TEST(conditional, full_visibility_node_is_p0) {
    auto g = MomentumGrid::for_separation(1.0);
    auto m = custom_model({{1, 1, 1}, {1, {0, 1}, {0, 1}}});
    auto cond = unit(conditional_pattern(m, kPoint, g, "0"));
    auto p0 = p0_pattern(single_aperture_amplitude(kPoint.profile, g), 1.0);
    EXPECT_LE(max_abs_diff(cond.values, p0.values), 1e-12 * p0.max());
    EXPECT_THROW(conditional_pattern(m, kPoint, g, "nope"), LookupError);
}

TEST(conditional, heisenberg_node_fringes_shift_by_kx_d) {
    double d = 1.0, k = 3.0;
    auto m = heisenberg_model(k, 0.0, DipoleSpec::isotropic(), d, {16, 16});
    auto g = MomentumGrid::for_separation(d);
    auto spectrum = single_aperture_amplitude(kPoint.profile, g);
    // The node closest to the x axis, and a generic one.
    size_t best = 0;
    for (size_t j = 0; j < m.channels.size(); ++j) {
        if (*m.channels[j].nominal_phase > *m.channels[best].nominal_phase) {
            best = j;
        }
    }
    for (size_t j : {best, size_t{37}}) {
        const auto &ch = m.channels[j];
        auto cond = unit(conditional_pattern(m, kPoint, g, ch.label));
        auto expect = fringe_pattern(spectrum, d, 1.0, *ch.nominal_phase);
        EXPECT_LE(max_abs_diff(cond.values, expect.values), 1e-12 * expect.max());
    }
    EXPECT_GT(*m.channels[best].nominal_phase, 0.99 * k * d);
}

TEST(reconstruction, marginal_is_mass_weighted_sum_of_conditionals) {
    auto g = MomentumGrid::for_separation(1.0);
    std::mt19937_64 rng(5);
    ApertureSetup rect{1.0, ApertureProfile::rectangular(0.1), 1.0};
    std::vector<DetectorModel> models = {
        heisenberg_model(2.0, 0.0, DipoleSpec::isotropic(), 1.0, {8, 8}),
        micromaser_model(10.0, 1.0, {40 * kPi / 10.0, 201}),
        random_custom(rng, 5),
        ideal_model(),
    };
    for (const auto &setup : {kPoint, rect}) {
        for (const auto &m : models) {
            auto marg = marginal_pattern(m, setup, g);
            EXPECT_LE(max_abs_diff(reconstruct(m, setup, g), marg.values), 1e-12 * marg.max());
        }
    }
}

TEST(basis, identity_rotation_is_noop) {
    std::mt19937_64 rng(1);
    auto m = canonicalize(random_custom(rng, 4));
    auto r = basis_rotate(m, Eigen::MatrixXcd::Identity(4, 4));
    for (size_t i = 0; i < 4; ++i) {
        EXPECT_LE(std::abs(r.channels[i].amp_a - m.channels[i].amp_a), 1e-15);
        EXPECT_LE(std::abs(r.channels[i].amp_b - m.channels[i].amp_b), 1e-15);
    }
}

TEST(basis, hadamard_reproduces_plus_minus_basis) {
    Eigen::MatrixXcd H(2, 2);
    // Row + = (|gamma_B> + |gamma_A>)/sqrt2, row - = (|gamma_B> - |gamma_A>)/sqrt2 in the (A, B) channel order.
    H << 1, 1, -1, 1;
    H /= std::sqrt(2.0);
    auto rotated = basis_rotate(ideal_model(), H);
    auto pm = plus_minus_basis(ideal_model());
    for (size_t i = 0; i < 2; ++i) {
        EXPECT_LE(std::abs(rotated.channels[i].amp_a - pm.channels[i].amp_a), 1e-15);
        EXPECT_LE(std::abs(rotated.channels[i].amp_b - pm.channels[i].amp_b), 1e-15);
    }
}

TEST(basis, property_invariance_under_random_unitaries) {
    auto g = MomentumGrid::for_separation(1.0, 1024);
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 30; ++t) {
        size_t dim = 2 + t % 7;
        auto m = canonicalize(random_custom(rng, dim));
        Eigen::MatrixXcd U = random_unitary(dim, rng);
        ASSERT_LE(unitarity_defect(U), 1e-12);
        auto r = basis_rotate(m, U);
        EXPECT_LE(std::abs(overlap(r) - overlap(m)), 1e-9);
        auto before = marginal_pattern(m, kPoint, g);
        auto after = marginal_pattern(r, kPoint, g);
        EXPECT_LE(max_abs_diff(before.values, after.values), 1e-9);
    }
}

TEST(basis, rejects_bad_input) {
    auto m = canonicalize(ideal_model());
    EXPECT_THROW(basis_rotate(m, Eigen::MatrixXcd::Identity(3, 3)), ValidationError);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 1.1;
    EXPECT_THROW(basis_rotate(m, bad), ValidationError);
    auto heavy = custom_model({{2, 1, 0}, {1, 0, 1}});
    EXPECT_THROW(basis_rotate(heavy, Eigen::MatrixXcd::Identity(2, 2)), PreconditionError);
}

TEST(correlation_form, unit_visibility_channels_give_p0) {
    auto g = MomentumGrid::for_separation(1.0);
    auto spectrum = single_aperture_amplitude(kPoint.profile, g);
    auto p0 = p0_pattern(spectrum, 1.0);
    auto env = envelope_pattern(kPoint.profile, g);
    auto cf = correlation_form_pattern(decompose(custom_model({{1, 1, 1}, {2, 1, 1}}), kPoint), p0, env);
    EXPECT_LE(max_abs_diff(cf.values, p0.values), 1e-12 * p0.max());
}

TEST(correlation_form, plus_minus_is_flat_topped) {
    double d = 1.0;
    auto g = MomentumGrid::for_separation(d);
    auto p0 = p0_pattern(single_aperture_amplitude(kPoint.profile, g), d);
    auto env = envelope_pattern(kPoint.profile, g);
    auto dec = decompose(plus_minus_basis(ideal_model()), kPoint);
    auto cf = correlation_form_pattern(dec, p0, env);
    auto plus = shift_pattern(p0, 0.0), minus = shift_pattern(p0, kPi / d);
    double window = correlation_form_window(dec, g);
    EXPECT_NEAR(window, g.p_max() - kPi / d, 1e-12);
    std::vector<double> sum(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        sum[i] = 0.5 * (plus.values[i] + minus.values[i]);
    }
    auto ref = make_pattern(g, sum, Normalization::unit);
    for (size_t i = 0; i < g.size(); ++i) {
        ASSERT_NEAR(cf.values[i], ref.values[i], 1e-12 * ref.max());
    }
    // No net fringes inside the window.
    auto fit = fitted_visibility(cf, kPoint);
    EXPECT_LE(fit.visibility, 2e-3);
}

TEST(correlation_form, micromaser_converges_as_apertures_narrow) {
    double d = 1.0, L = 10.0;
    auto g = MomentumGrid::for_separation(d);
    auto m = micromaser_model(L, d, default_cavity_grid(L));
    double previous = INFINITY;
    for (double a : {0.04, 0.02, 0.01}) {
        ApertureSetup setup{d, ApertureProfile::rectangular(a * d), 1.0};
        auto dec = decompose(m, setup);
        auto p0 = p0_pattern(single_aperture_amplitude(setup.profile, g), d);
        auto env = envelope_pattern(setup.profile, g);
        auto cf = correlation_form_pattern(dec, p0, env);
        double err = windowed_linf_relative_error(cf, marginal_pattern(m, setup, g), correlation_form_window(dec, g));
        EXPECT_LT(err, previous) << a;
        previous = err;
    }
    EXPECT_LE(previous, 1e-2);
}

TEST(histogram, plus_minus_basis_has_two_bins) {
    double d = 2.0;
    ApertureSetup setup{d, ApertureProfile::point(), 1.0};
    auto h = transfer_histogram(decompose(plus_minus_basis(ideal_model()), setup), 2);
    ASSERT_EQ(h.masses.size(), 2u);
    EXPECT_NEAR(h.bin_centers[0], 0.0, 1e-15);
    EXPECT_NEAR(h.bin_centers[1], kPi / d, 1e-15);
    EXPECT_NEAR(h.masses[0], 0.5, 1e-15);
    EXPECT_NEAR(h.masses[1], 0.5, 1e-15);
    EXPECT_EQ(h.excluded_mass, 0.0);

    auto fine = transfer_histogram(decompose(plus_minus_basis(ideal_model()), setup), 32);
    double at_zero = 0.0, at_pi = 0.0;
    for (size_t b = 0; b < fine.masses.size(); ++b) {
        if (std::abs(fine.bin_centers[b]) < 1e-12) {
            at_zero += fine.masses[b];
        }
        if (std::abs(std::abs(fine.bin_centers[b]) - kPi / d) < 1e-12) {
            at_pi += fine.masses[b];
        }
    }
    EXPECT_NEAR(at_zero, 0.5, 1e-15);
    EXPECT_NEAR(at_pi, 0.5, 1e-15);
}

TEST(histogram, single_channel_all_at_zero_and_marker_all_excluded) {
    auto h = transfer_histogram(decompose(custom_model({{1, 1, 1}}), kPoint), 16);
    double total = 0.0;
    for (size_t b = 0; b < h.masses.size(); ++b) {
        total += h.masses[b];
        if (h.masses[b] > 0) {
            EXPECT_NEAR(h.bin_centers[b], 0.0, 1e-15);
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_EQ(h.phase_iqr, 0.0);

    auto marker = transfer_histogram(decompose(ideal_model(), kPoint), 16);
    EXPECT_NEAR(marker.excluded_mass, 1.0, 1e-15);
    for (double m : marker.masses) {
        EXPECT_EQ(m, 0.0);
    }
}

TEST(histogram, micromaser_iqr_matches_direct_computation) {
    double L = 10.0, d = 1.0;
    auto g = default_cavity_grid(L);
    auto h = transfer_histogram(decompose(micromaser_model(L, d, g), {d, ApertureProfile::point(), 1.0}), 64);
    // Independent weighted IQR over a denser grid of the sinc^2 spectrum.
    std::vector<std::pair<double, double>> vm;
    size_t n = 40001;
    for (size_t j = 0; j < n; ++j) {
        double k = g.k_max * (2.0 * j / (n - 1.0) - 1.0);
        double s = whichpath::testing::ref_sinc(0.5 * k * L);
        vm.emplace_back(ref_wrap(k * L), s * s);
    }
    double iqr = ref_weighted_quantile(vm, 0.75) - ref_weighted_quantile(vm, 0.25);
    EXPECT_NEAR(h.phase_iqr, iqr, 0.01);
    EXPECT_GE(h.phase_iqr, 1.0);
    EXPECT_NEAR(h.spread_product, h.momentum_iqr * d, 1e-15);
}

TEST(histogram, weighted_quantile_examples) {
    EXPECT_EQ(weighted_quantile({{3, 1}, {1, 1}, {2, 2}}, 0.5), 2.0);
    EXPECT_EQ(weighted_quantile({{3, 1}, {1, 1}, {2, 2}}, 0.25), 1.0);
    EXPECT_EQ(weighted_quantile({{3, 1}, {1, 1}, {2, 2}}, 1.0), 3.0);
}

TEST(fit, round_trip) {
    auto g = MomentumGrid::for_separation(1.0);
    for (auto prof : {ApertureProfile::point(), ApertureProfile::rectangular(0.3), ApertureProfile::gaussian(0.08)}) {
        ApertureSetup setup{1.0, prof, 1.0};
        auto s = single_aperture_amplitude(prof, g);
        auto fit = fitted_visibility(fringe_pattern(s, 1.0, 0.7, 0.3), setup);
        EXPECT_NEAR(fit.visibility, 0.7, 1e-6);
        EXPECT_NEAR(fit.phase, 0.3, 1e-6);
        EXPECT_LE(fitted_visibility(fringe_pattern(s, 1.0, 0.0, 0.0), setup).visibility, 1e-9);
    }
}

TEST(fit, rejects_short_grid) {
    MomentumGrid g(2.0, 64);
    auto p = envelope_pattern(ApertureProfile::point(), g);
    EXPECT_THROW(fitted_visibility(p, kPoint), PreconditionError);
}

TEST(wk, rect_autocorrelation) {
    EXPECT_EQ(wk_visibility_rect(3.0, 3.0), 0.0);
    EXPECT_EQ(wk_visibility_rect(3.0, 0.0), 1.0);
    EXPECT_NEAR(wk_visibility_rect(1.0, 0.5), 0.5, 1e-15);
    EXPECT_EQ(wk_visibility_rect(1.0, 7.0), 0.0);
    EXPECT_THROW(wk_visibility_rect(0.0, 1.0), DomainError);
}

TEST(wk, half_lag_matches_spectral_integral) {
    double L = 1.0, lag = 0.5, K = 2000.0;
    auto w = [&](double k) {
        double s = whichpath::testing::ref_sinc(0.5 * k * L);
        return s * s;
    };
    double num = whichpath::testing::simpson([&](double k) { return w(k) * std::cos(k * lag); }, -K, K, 2000000);
    double den = whichpath::testing::simpson(w, -K, K, 2000000);
    EXPECT_NEAR(num / den, 0.5, 1e-3);
    EXPECT_NEAR(num / den, wk_visibility_rect(L, lag), 1e-3);
    auto m = rect_cavity_model(L, lag, default_cavity_grid(L));
    EXPECT_NEAR(overlap(m).real(), 0.5, 1e-3);
}

TEST(conditional, batch_matches_single_calls) {
    auto g = MomentumGrid::for_separation(1.0, 512);
    std::mt19937_64 rng(31);
    auto m = random_custom(rng, 4);
    m.channels.push_back({"dead", 1.0, 0.0, 0.0, std::nullopt});
    ConditionalPatterns batch(m, kPoint, g);
    EXPECT_EQ(batch.marginal().values, marginal_pattern(m, kPoint, g).values);
    ASSERT_EQ(batch.decomposition().components.size(), 4u);
    for (const auto &c : batch.decomposition().components) {
        EXPECT_EQ(batch.conditional(c).values, conditional_pattern(m, kPoint, g, c.label).values);
    }
    // A channel with no amplitude on either path carries no fringe term.
    auto dead = conditional_pattern(m, kPoint, g, "dead");
    auto env = envelope_pattern(kPoint.profile, g);
    for (size_t i = 1; i < g.size(); ++i) {
        ASSERT_NEAR(dead.values[i] / env.values[i], dead.values[0] / env.values[0], 1e-12);
    }
    EXPECT_THROW(batch.conditional("missing"), LookupError);
}
