//! Bundled reference data: the field moduli and Weierstrass models used in
//! the worked examples for p in {23, 37, 61}.  Sessions built from these
//! fixtures are label-identical to the published tables; default sessions
//! (no overrides) use the deterministic representative rule instead and are
//! self-consistent but not label-identical.

use crate::session::SessionConfig;

pub const P23_FP2: &str = "s^2+21*s+5";
pub const P37_FP2: &str = "s^2+33*s+2";
pub const P37_TOWER: &str = "a^4+6*a^2+24*a+2";
pub const P61_FP2: &str = "s^2+60*s+2";

pub const P23_MODELS: &str = include_str!("../fixtures/p23_models.txt");
pub const P37_MODELS: &str = include_str!("../fixtures/p37_models.txt");
pub const P61_MODELS: &str = include_str!("../fixtures/p61_models.txt");

/// The reference session configuration for p in {23, 37, 61}, if bundled.
pub fn reference_config(p: u64, n: u64, ell: Option<u64>) -> Option<SessionConfig> {
    let (fp2, models) = match p {
        23 => (P23_FP2, P23_MODELS),
        37 => (P37_FP2, P37_MODELS),
        61 => (P61_FP2, P61_MODELS),
        _ => return None,
    };
    // The quartic tower is the 3-torsion field of the p = 37 curves; other
    // levels may need a different working degree.
    let tower = (p == 37 && n == 3 && ell != Some(5)).then(|| P37_TOWER.to_string());
    Some(SessionConfig {
        p,
        n,
        ell,
        fp2_modulus: Some(fp2.to_string()),
        tower_modulus: tower,
        overrides: Some(models.to_string()),
    })
}
