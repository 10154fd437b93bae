//! Re-measure the frozen empirical envelope constants in `batch`.
//!
//! Prints the sweep extremes for a handful of seeds at the same scale the
//! acceptance checks use.  If a code change legitimately shifts these
//! numbers (new random families, different sizes), rerun this, eyeball the
//! seed spread, and refreeze the constants with headroom.

use splitstep::batch::{continuous_ratio_sweep, gn_envelope};

fn main() {
    println!("discrete interpolation ratio, K in {{8, 32, 128, 512}}, 1000 states each:");
    for seed in [11u64, 12, 13, 99] {
        let ext = gn_envelope(&[8, 32, 128, 512], 1000, seed);
        println!(
            "  seed {seed:>3}: max_gn {:.6}  equiv window [{:.6}, {:.6}]  degenerate {}",
            ext.max_gn, ext.min_equiv, ext.max_equiv, ext.degenerate
        );
    }

    println!("continuous ratios, max_mode in {{2, 4, 8, 16, 24}}, 200 series each:");
    for seed in [11u64, 12, 13, 99] {
        let ext = continuous_ratio_sweep(&[2, 4, 8, 16, 24], 200, seed);
        println!(
            "  seed {seed:>3}: max_gn {:.6}  max_linf {:.6}  degenerate {}",
            ext.max_gn, ext.max_linf, ext.degenerate
        );
    }
}
