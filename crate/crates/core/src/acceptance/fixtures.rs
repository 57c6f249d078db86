//! Reference values computed independently (mpmath, exact fractions, sympy)
//! before the library existed. Do not regenerate them from this crate.

/// `||A g^(n) - indicator({1})||` on uniform(-1,1) plus a unit atom at 1, `n = 4, 8, ..., 1024`.
pub const COUNTEREXAMPLE_RESIDUALS: [(usize, &str); 9] = [
    (4, "0.41403933560541253068"),
    (8, "0.29394299856007185137"),
    (16, "0.20806557770976969313"),
    (32, "0.14716330367263043642"),
    (64, "0.10406703589945924988"),
    (128, "0.07358772143953499732"),
    (256, "0.052034591605788183252"),
    (512, "0.036794050547767599179"),
    (1024, "0.02601732936141499725"),
];

pub const GAUSSIAN_CARLEMAN_S50: &str = "14.44579675012462938072874";
pub const GAUSSIAN_CARLEMAN_S200: &str = "30.86365778968230099338406";
pub const GAUSSIAN_GROWTH_R4: &str = "0.4472894667427123378";
pub const GAUSSIAN_GROWTH_R40: &str = "0.13621142738825748019";
pub const LOGNORMAL_CARLEMAN_S50: &str = "0.3333333333333333333333333";
pub const LOGNORMAL_CARLEMAN_GAP: &str = "2.629536351e-31";

/// Hilbert-Schmidt partial sums of `B` at `N = 10, 20, 30` from exact Gram-Schmidt.
pub const UNIFORM_HS: [(usize, &str); 3] = [
    (10, "9052115.76019287109375"),
    (20, "287155361957411.5953544404474087059497833"),
    (30, "10577836814098826959476.33005950047618526"),
];
pub const LOGNORMAL_HS: [(usize, &str); 3] = [
    (10, "1.583503046926206697419563772861430031552"),
    (20, "1.583503714040141002515583118229592137203"),
    (30, "1.583503714040777212056360205228218706267"),
];

pub const SQRT_E: &str = "1.648721270700128146848650787814163571654";
