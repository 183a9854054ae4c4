//! Built-in sweep documents.
//!
//! Amplitudes are absolute; the ladders below span `A/ε₁ ∈ [1, 16]` for the
//! default `ε₁ = 4`.

pub const NAMES: [&str; 6] = ["fig2", "fig3", "fig4", "fig5", "fig6", "appendixB"];

const FIG2: &str = "
mode = zero_work
beta_ratio = 0.25, 0.5, 0.75, 0.9
points = 100
";

const FIG3: &str = "
drive = lz
ratio = 0.4, 0.6
tau_linspace = 0.5, 50, 100
n = 50001
";

const FIG4: &str = "
drive = lz
tau = 0.5, 1.0, 1.5
ratio_linspace = 0.15, 1.0, 86
";

const FIG5: &str = "
drive = lz, inv
protocol = quintic
tau = 1.0
ratio = 0.4, 0.6
a_geomspace = 4, 64, 11
";

const FIG6: &str = "
drive = lz, inv
protocol = quintic
tau = 0.5, 1.0, 1.5
ratio = 0.4
a_geomspace = 4, 64, 11
";

const APPENDIX_B: &str = "
drive = lz, inv
protocol = sine, sextic
tau = 1.0
ratio = 0.4, 0.6
a_geomspace = 4, 64, 11
";

pub fn lookup(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => FIG2,
        "fig3" => FIG3,
        "fig4" => FIG4,
        "fig5" => FIG5,
        "fig6" => FIG6,
        "appendixB" => APPENDIX_B,
        _ => return None,
    })
}
