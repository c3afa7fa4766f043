//! Frozen regression values. Every expected number below was produced by an
//! independent high-precision oracle (adaptive quadrature, 50-digit series,
//! or numerical Laplace inversion of the closed-form transform) before being
//! frozen here; none is a self-recorded output of the code under test.

use levywright::cbi::{self, CbiParams};
use levywright::expfun;
use levywright::levy::{self, FamilyParams};

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let rel = ((got - want) / want).abs();
    assert!(rel <= tol, "{what}: got {got:e}, want {want:e}, rel {rel:e}");
}

#[test]
fn psi_gamma_at_unit() {
    // c·Γ(2.5) with (0)_α = 0.
    let p = FamilyParams::gamma_family(1.5, 0.0).unwrap();
    assert_rel(
        levy::psi_gamma(&p, 1.0).unwrap(),
        1.2533141373155003,
        1e-12,
        "psi_gamma(1.5, 0; 1)",
    );
}

#[test]
fn drift_constant() {
    assert_rel(
        levy::drift_tilde(&FamilyParams::gamma_family(1.5, 0.0).unwrap()).unwrap(),
        1.0127644893996860,
        1e-10,
        "c_tilde(1.5, 0)",
    );
}

#[test]
fn integral_identity_value() {
    // Both sides of the Thm 2.2 identity at (α, γ, λ) = (1.5, 0, 1).
    let (lhs, rhs) = levy::verify_integral_identity(1.5, 0.0, 1.0).unwrap();
    assert_rel(lhs, 0.45542957651263, 1e-9, "identity lhs");
    assert_rel(rhs, 0.45542957651263, 1e-10, "identity rhs");
}

#[test]
fn transition_density_series_regime() {
    let p = CbiParams::new(0.5, 0.8, 0.0).unwrap();
    for (y, want) in [
        (0.5, 0.2945535570778343),
        (1.0, 0.187584334027802),
        (2.0, 0.0995645980063279),
    ] {
        assert_rel(
            cbi::transition_density(&p, 0.7, 0.4, y, 1e-11, 300).unwrap(),
            want,
            1e-9,
            "p_0.7(0.4, y)",
        );
    }
}

#[test]
fn transition_density_inversion_regime() {
    // Large starting point: served by the Talbot fallback; truth from
    // high-precision inversion of the closed-form transform.
    let p = CbiParams::new(0.5, 0.8, 0.0).unwrap();
    assert_rel(
        cbi::transition_density(&p, 0.5, 15.0, 2.0, 1e-10, 300).unwrap(),
        4.963341918913328e-5,
        1e-7,
        "p_0.5(15, 2)",
    );
    assert_rel(
        cbi::transition_density(&p, 0.5, 25.0, 2.0, 1e-10, 300).unwrap(),
        1.119220093528174e-10,
        1e-6,
        "p_0.5(25, 2)",
    );
}

#[test]
fn ihat_values() {
    for (kappa, x, want) in [
        (0.45, 0.3, 0.21086937405811269819),
        (0.7, 1.0, 0.19848929770771146648),
        (1.0, 1.0, 0.27973176363304485457),
    ] {
        assert_rel(
            cbi::ihat(kappa, x).unwrap(),
            want,
            1e-9,
            "ihat(kappa, x)",
        );
    }
}

#[test]
fn thm_e1_quantile_at_exp_minus_one() {
    // u = e^{−1} ⇒ (−ln u)^{−κ}/(cκ) = 1/(cκ) at κ = 1/2.
    let got = expfun::thm_e1_quantile(0.5, (-1.0f64).exp()).unwrap();
    assert_rel(got, 2.1213203435596424, 1e-12, "thm_e1_quantile");
}
