//! Published reference values.
//!
//! Every constant here is quoted data: initial-set values, optimized
//! values and the numbers reported for competing methods. Nothing in this
//! module is computed. Missing entries are `None`.

/// Star discrepancies at `n = 260` for one starting construction.
#[derive(Clone, Copy, Debug)]
pub struct StarRow {
    pub init: &'static str,
    pub l2_initial: f64,
    pub l2_optimized: f64,
    pub linf_initial: f64,
    pub linf_optimized: f64,
}

pub const STAR_260: [StarRow; 3] = [
    StarRow {
        init: "fibonacci",
        l2_initial: 0.003438,
        l2_optimized: 0.001893,
        linf_initial: 0.01200,
        linf_optimized: 0.007035,
    },
    StarRow {
        init: "sqrt2-lattice",
        l2_initial: 0.003714,
        l2_optimized: 0.001927,
        linf_initial: 0.01192,
        linf_optimized: 0.007960,
    },
    StarRow {
        init: "sobol",
        l2_initial: 0.003525,
        l2_optimized: 0.002344,
        linf_initial: 0.01546,
        linf_optimized: 0.01015,
    },
];

/// Summary over 200 uniform random starts of 260 points after optimization.
#[derive(Clone, Copy, Debug)]
pub struct RandomSummary {
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

pub const RANDOM_260_L2: RandomSummary = RandomSummary {
    median: 0.003642,
    mean: 0.003618,
    min: 0.003041,
    max: 0.004411,
};
pub const RANDOM_260_LINF: RandomSummary = RandomSummary {
    median: 0.02238,
    mean: 0.01943,
    min: 0.01432,
    max: 0.04615,
};

/// L2 star root of 2000 unoptimized uniform random sets of 260 points.
pub const RANDOM_260_INITIAL_L2_MEAN: f64 = 0.007789;
pub const RANDOM_260_INITIAL_L2_MIN: f64 = 0.004529;

/// Best values after 400 restarts from one uniform random set of 260 points.
pub const RESTART_400_BEST_L2: f64 = 0.003018;
pub const RESTART_400_BEST_LINF: f64 = 0.01344;

/// Planar L∞ star discrepancy of optimized Fibonacci sets against
/// message-passing Monte Carlo and nonlinear programming.
#[derive(Clone, Copy, Debug)]
pub struct PlanarLinfRow {
    pub n: usize,
    pub returned: f64,
    pub best: f64,
    pub mpmc: f64,
    pub nlp: f64,
}

pub const PLANAR_LINF: [PlanarLinfRow; 5] = [
    PlanarLinfRow {
        n: 20,
        returned: 0.068339,
        best: 0.065558,
        mpmc: 0.0666,
        nlp: 0.06219,
    },
    PlanarLinfRow {
        n: 100,
        returned: 0.016419,
        best: 0.016115,
        mpmc: 0.0188,
        nlp: 0.01492,
    },
    PlanarLinfRow {
        n: 180,
        returned: 0.010313,
        best: 0.010119,
        mpmc: 0.0115,
        nlp: 0.00901,
    },
    PlanarLinfRow {
        n: 260,
        returned: 0.007047,
        best: 0.006965,
        mpmc: 0.0084,
        nlp: 0.00640,
    },
    PlanarLinfRow {
        n: 420,
        returned: 0.005072,
        best: 0.004992,
        mpmc: 0.0058,
        nlp: 0.00412,
    },
];

/// L∞ star discrepancy in dimension 3 to 5 for Sobol' and L2-subset starts.
#[derive(Clone, Copy, Debug)]
pub struct HighDimRow {
    pub n: usize,
    pub pgd_sobol: f64,
    pub sobol: f64,
    pub pgd_subset: f64,
    pub subset: f64,
}

const fn hd(n: usize, pgd_sobol: f64, sobol: f64, pgd_subset: f64, subset: f64) -> HighDimRow {
    HighDimRow {
        n,
        pgd_sobol,
        sobol,
        pgd_subset,
        subset,
    }
}

pub const LINF_3D: [HighDimRow; 6] = [
    hd(50, 0.088927, 0.09708, 0.05864, 0.05952),
    hd(100, 0.044201, 0.06058, 0.03740, 0.03835),
    hd(150, 0.032323, 0.04483, 0.02499, 0.02612),
    hd(200, 0.029209, 0.03315, 0.02181, 0.02203),
    hd(250, 0.020672, 0.02548, 0.01837, 0.01840),
    hd(500, 0.01194, 0.01460, 0.01125, 0.01207),
];

pub const LINF_4D: [HighDimRow; 6] = [
    hd(50, 0.114514, 0.13422, 0.07968, 0.08482),
    hd(100, 0.068758, 0.09269, 0.04660, 0.04760),
    hd(150, 0.054589, 0.06174, 0.03937, 0.04110),
    hd(200, 0.048119, 0.05026, 0.03013, 0.03008),
    hd(250, 0.033515, 0.03822, 0.02604, 0.02596),
    hd(500, 0.02077, 0.02290, 0.01645, 0.01810),
];

pub const LINF_5D: [HighDimRow; 5] = [
    hd(50, 0.144112, 0.165488, 0.11355, 0.115507),
    hd(100, 0.081881, 0.120707, 0.063010, 0.070071),
    hd(150, 0.063564, 0.074899, 0.05324, 0.055612),
    hd(200, 0.053791, 0.058292, 0.04249, 0.043016),
    hd(500, 0.02914, 0.029017, 0.02454, 0.026378),
];

pub fn linf_high_dim(d: usize) -> Option<&'static [HighDimRow]> {
    match d {
        3 => Some(&LINF_3D),
        4 => Some(&LINF_4D),
        5 => Some(&LINF_5D),
        _ => None,
    }
}

/// Planar periodic or extreme L2 roots for Sobol' and Fibonacci starts.
#[derive(Clone, Copy, Debug)]
pub struct PlanarL2Row {
    pub n: usize,
    pub pgd_sobol: f64,
    pub pgd_fibonacci: f64,
    pub mpmc: f64,
    pub sobol: f64,
    pub fibonacci: f64,
}

const fn pl(
    n: usize,
    pgd_sobol: f64,
    pgd_fibonacci: f64,
    mpmc: f64,
    sobol: f64,
    fibonacci: f64,
) -> PlanarL2Row {
    PlanarL2Row {
        n,
        pgd_sobol,
        pgd_fibonacci,
        mpmc,
        sobol,
        fibonacci,
    }
}

pub const PERIODIC: [PlanarL2Row; 5] = [
    pl(16, 0.048778, 0.03642, 0.0381, 0.05163, 0.03819),
    pl(32, 0.02276, 0.01923, 0.0208, 0.02336, 0.02075),
    pl(64, 0.01276, 0.01038, 0.0114, 0.01312, 0.01158),
    pl(128, 0.00695, 0.00540, 0.0060, 0.00719, 0.00589),
    pl(256, 0.00409, 0.00286, 0.0034, 0.00437, 0.00317),
];

pub const EXTREME: [PlanarL2Row; 5] = [
    pl(16, 0.02026, 0.01558, 0.0159, 0.02474, 0.01578),
    pl(32, 0.00984, 0.00844, 0.0088, 0.01108, 0.00854),
    pl(64, 0.00539, 0.00452, 0.0049, 0.00630, 0.00456),
    pl(128, 0.00304, 0.00240, 0.0027, 0.00347, 0.00242),
    pl(256, 0.00166, 0.00127, 0.0015, 0.00214, 0.00128),
];
