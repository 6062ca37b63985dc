//! Step fractions of palindromic composition schemes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Complex64;

/// Real solution of `2α + β = 1`, `2α^{p+1} + β^{p+1} = 0`.
pub fn triple_jump_real(p: u32) -> (f64, f64) {
    assert!(p >= 2 && p % 2 == 0, "triple jump needs an even order >= 2");
    let r = 2f64.powf(1.0 / (p as f64 + 1.0));
    (1.0 / (2.0 - r), -r / (2.0 - r))
}

/// Complex solution of the triple-jump order conditions with `Re α, Re β > 0`.
pub fn triple_jump_complex(p: u32) -> (Complex64, Complex64) {
    assert!(p >= 2 && p % 2 == 0, "triple jump needs an even order >= 2");
    let e = Complex64::from_polar(1.0, std::f64::consts::PI / (p as f64 + 1.0));
    let r = 2f64.powf(1.0 / (p as f64 + 1.0));
    let denom = 2.0 * e + r;
    (e / denom, Complex64::new(r, 0.0) / denom)
}

/// Coefficient family of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeFamily {
    Order2,
    TripleJumpReal,
    TripleJumpComplex,
    Suzuki4,
    KahanLi6,
}

/// Scheme names accepted by the configuration and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    M2,
    Tj4Real,
    Tj4Complex,
    Tj6Real,
    Tj6Complex,
    Suzuki4,
    KahanLi6,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 7] = [
        SchemeKind::M2,
        SchemeKind::Tj4Real,
        SchemeKind::Tj4Complex,
        SchemeKind::Tj6Real,
        SchemeKind::Tj6Complex,
        SchemeKind::Suzuki4,
        SchemeKind::KahanLi6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::M2 => "m2",
            SchemeKind::Tj4Real => "tj4_real",
            SchemeKind::Tj4Complex => "tj4_complex",
            SchemeKind::Tj6Real => "tj6_real",
            SchemeKind::Tj6Complex => "tj6_complex",
            SchemeKind::Suzuki4 => "suzuki4",
            SchemeKind::KahanLi6 => "kahanli6",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, SchemeKind::Tj4Complex | SchemeKind::Tj6Complex)
    }

    pub fn scheme(self) -> CompositionScheme {
        match self {
            SchemeKind::M2 => CompositionScheme::order2(),
            SchemeKind::Tj4Real => CompositionScheme::triple_jump(4, false),
            SchemeKind::Tj4Complex => CompositionScheme::triple_jump(4, true),
            SchemeKind::Tj6Real => CompositionScheme::triple_jump(6, false),
            SchemeKind::Tj6Complex => CompositionScheme::triple_jump(6, true),
            SchemeKind::Suzuki4 => CompositionScheme::suzuki4(),
            SchemeKind::KahanLi6 => CompositionScheme::kahan_li6(),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SchemeKind::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!("unknown scheme {s:?} (expected one of {})", names.join(", ")))
            })
    }
}

/// Fractions `γ_0 .. γ_s` of `M(dt) = M_2(γ_0 dt) ... M_2(γ_s dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionScheme {
    pub gammas: Vec<Complex64>,
    pub nominal_order: u32,
    pub family: SchemeFamily,
}

/// Kahan-Li nine-stage sixth-order fractions `γ_0..γ_4` (the rest mirror).
const KAHAN_LI_6: [f64; 5] = [
    0.392_161_444_007_314_139_275_655_330_038_380_932_595_385_404_354_442_882_183_619,
    0.332_599_136_789_359_438_604_272_125_325_790_569_941_599_549_617_156_528_439_173,
    -0.706_246_172_557_639_359_809_845_337_222_763_994_485_425_050_210_063_375_842_163,
    0.082_213_596_293_550_800_230_442_705_334_113_414_342_846_980_722_210_377_281_128_0,
    0.798_543_990_934_829_963_398_950_353_048_958_155_211_186_231_032_507_175_876_486,
];

impl CompositionScheme {
    pub fn order2() -> Self {
        Self {
            gammas: vec![Complex64::new(1.0, 0.0)],
            nominal_order: 2,
            family: SchemeFamily::Order2,
        }
    }

    /// Recursive triple jump from order 2 up to `order`: `3^{(order-2)/2}`
    /// second-order substeps.
    pub fn triple_jump(order: u32, complex: bool) -> Self {
        assert!(order >= 2 && order % 2 == 0);
        let mut gammas = vec![Complex64::new(1.0, 0.0)];
        let mut p = 2;
        while p < order {
            let (a, b) = if complex {
                triple_jump_complex(p)
            } else {
                let (a, b) = triple_jump_real(p);
                (Complex64::new(a, 0.0), Complex64::new(b, 0.0))
            };
            let mut next = Vec::with_capacity(3 * gammas.len());
            for factor in [a, b, a] {
                next.extend(gammas.iter().map(|g| g * factor));
            }
            gammas = next;
            p += 2;
        }
        Self {
            gammas,
            nominal_order: order,
            family: if order == 2 {
                SchemeFamily::Order2
            } else if complex {
                SchemeFamily::TripleJumpComplex
            } else {
                SchemeFamily::TripleJumpReal
            },
        }
    }

    /// Five-stage fourth-order scheme with every `|γ_i| < 1`.
    pub fn suzuki4() -> Self {
        let c = 4f64.cbrt();
        let outer = 1.0 / (4.0 - c);
        let inner = -c / (4.0 - c);
        Self {
            gammas: [outer, outer, inner, outer, outer]
                .into_iter()
                .map(|g| Complex64::new(g, 0.0))
                .collect(),
            nominal_order: 4,
            family: SchemeFamily::Suzuki4,
        }
    }

    /// Nine-stage sixth-order scheme.
    pub fn kahan_li6() -> Self {
        let g = KAHAN_LI_6;
        Self {
            gammas: [g[0], g[1], g[2], g[3], g[4], g[3], g[2], g[1], g[0]]
                .into_iter()
                .map(|g| Complex64::new(g, 0.0))
                .collect(),
            nominal_order: 6,
            family: SchemeFamily::KahanLi6,
        }
    }

    pub fn is_real(&self) -> bool {
        self.gammas.iter().all(|g| g.im == 0.0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.gammas.iter().eq(self.gammas.iter().rev())
    }

    pub fn sum(&self) -> Complex64 {
        self.gammas.iter().sum()
    }

    pub fn max_abs_gamma(&self) -> f64 {
        self.gammas.iter().map(|g| g.norm()).fold(0.0, f64::max)
    }
}
