use std::fmt;

use serde_json::{json, Value};

use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::linalg::{rank_of, Scalar};

use super::{Ligation, SurgeryResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRank {
    /// 0-based `(i, j)`.
    pub block: (usize, usize),
    pub rank: usize,
    pub dim: usize,
}

impl BlockRank {
    pub fn is_full(&self) -> bool {
        self.rank == self.dim
    }

    fn to_json(&self) -> Value {
        json!({ "block": [self.block.0 + 1, self.block.1 + 1], "rank": self.rank, "dim": self.dim })
    }
}

/// Everything `certify_equivalence` measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    /// Blocks `M_ij` of the input context that are not unital.
    pub non_unital_blocks: Vec<(usize, usize)>,
    pub n_unital: bool,
    pub l_unital: bool,
    pub zeta_rank: usize,
    pub r_dim: usize,
    pub theta_rank: usize,
    pub s_dim: usize,
    pub alpha_blocks: Vec<BlockRank>,
    pub alpha_rank: usize,
    pub alpha_target: usize,
    pub alpha_prime_blocks: Vec<BlockRank>,
    pub alpha_prime_rank: usize,
    pub alpha_prime_target: usize,
}

impl Evidence {
    pub fn unital(&self) -> bool {
        self.non_unital_blocks.is_empty() && self.n_unital && self.l_unital
    }

    pub fn zeta_surjective(&self) -> bool {
        self.zeta_rank == self.r_dim
    }

    pub fn theta_surjective(&self) -> bool {
        self.theta_rank == self.s_dim
    }

    pub fn alpha_surjective(&self) -> bool {
        self.alpha_rank == self.alpha_target && self.alpha_blocks.iter().all(BlockRank::is_full)
    }

    pub fn alpha_prime_surjective(&self) -> bool {
        self.alpha_prime_rank == self.alpha_prime_target && self.alpha_prime_blocks.iter().all(BlockRank::is_full)
    }

    /// Human-readable descriptions of every condition that does not hold.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &(i, j) in &self.non_unital_blocks {
            out.push(format!("M{}{} not unital", i + 1, j + 1));
        }
        if !self.n_unital {
            out.push("N not unital".into());
        }
        if !self.l_unital {
            out.push("L not unital".into());
        }
        if !self.zeta_surjective() {
            out.push(format!("ζ not surjective (rank {} of {})", self.zeta_rank, self.r_dim));
        }
        if !self.theta_surjective() {
            out.push(format!("θ not surjective (rank {} of {})", self.theta_rank, self.s_dim));
        }
        if !self.alpha_surjective() {
            out.push(deficiency("|α|", self.alpha_rank, self.alpha_target, &self.alpha_blocks));
        }
        if !self.alpha_prime_surjective() {
            out.push(deficiency("|α'|", self.alpha_prime_rank, self.alpha_prime_target, &self.alpha_prime_blocks));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let blocks = |b: &[BlockRank]| b.iter().map(BlockRank::to_json).collect::<Vec<_>>();
        json!({
            "unitality": {
                "pass": self.unital(),
                "non_unital_blocks": self.non_unital_blocks.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
                "N": self.n_unital,
                "L": self.l_unital,
            },
            "zeta": { "rank": self.zeta_rank, "dim": self.r_dim, "surjective": self.zeta_surjective() },
            "theta": { "rank": self.theta_rank, "dim": self.s_dim, "surjective": self.theta_surjective() },
            "alpha": {
                "rank": self.alpha_rank,
                "dim": self.alpha_target,
                "surjective": self.alpha_surjective(),
                "blocks": blocks(&self.alpha_blocks),
            },
            "alpha_prime": {
                "rank": self.alpha_prime_rank,
                "dim": self.alpha_prime_target,
                "surjective": self.alpha_prime_surjective(),
                "blocks": blocks(&self.alpha_prime_blocks),
            },
        })
    }
}

fn deficiency(name: &str, rank: usize, target: usize, blocks: &[BlockRank]) -> String {
    let short: Vec<String> = blocks
        .iter()
        .filter(|b| !b.is_full())
        .map(|b| format!("({},{}) {}/{}", b.block.0 + 1, b.block.1 + 1, b.rank, b.dim))
        .collect();
    format!("{name} not surjective (rank {rank} of {target}; blocks {})", short.join(", "))
}

/// Surjectivity of both factored ligations, with the evidence that shows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub evidence: Evidence,
    pub conclusion: String,
}

impl EquivalenceCertificate {
    pub fn to_json(&self) -> Value {
        json!({ "granted": true, "conclusion": self.conclusion, "evidence": self.evidence.to_json() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refusal {
    pub evidence: Evidence,
    pub reasons: Vec<String>,
}

impl Refusal {
    pub fn to_json(&self) -> Value {
        json!({ "granted": false, "reasons": self.reasons, "evidence": self.evidence.to_json() })
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "refusal: {}", self.reasons.join("; "))
    }
}

/// Per-target-block image ranks of a blockwise ligation.
fn block_ranks(l: &Ligation, n: usize, target_dims: &[usize]) -> Vec<BlockRank> {
    let f = l.map.field();
    (0..n * n)
        .map(|b| {
            let (i, j) = (b / n, b % n);
            let values: Vec<Vec<Scalar>> = (0..n)
                .flat_map(|k| {
                    let m: &BilinearMap = &l.blocks[(i * n + k) * n + j];
                    (0..m.left_dim()).flat_map(move |x| (0..m.right_dim()).map(move |y| m.basis(x, y).to_vec()))
                })
                .collect();
            BlockRank { block: (i, j), rank: rank_of(f, target_dims[b], &values), dim: target_dims[b] }
        })
        .collect()
}

/// Collects the evidence and grants the certificate iff both factored
/// ligations are surjective; unitality and surjectivity of `ζ`, `θ` are
/// recorded alongside.
pub fn certify_equivalence(r: &SurgeryResult) -> Result<EquivalenceCertificate, Refusal> {
    let g = &r.input;
    let c = &r.classical;
    let n = g.n();
    let non_unital_blocks = (0..n * n)
        .map(|b| (b / n, b % n))
        .filter(|&(i, j)| !g.block(i, j).is_unital())
        .collect();
    let dims = |x: &[Bimodule]| x.iter().map(Bimodule::dim).collect::<Vec<_>>();
    let evidence = Evidence {
        non_unital_blocks,
        n_unital: c.n_module().is_unital(),
        l_unital: c.l_module().is_unital(),
        zeta_rank: c.zeta().image_rank(),
        r_dim: c.r().dim(),
        theta_rank: c.theta().image_rank(),
        s_dim: c.s().dim(),
        alpha_blocks: block_ranks(&r.alpha, n, &dims(g.blocks())),
        alpha_rank: r.alpha.rank(),
        alpha_target: r.alpha.target_dim(),
        alpha_prime_blocks: block_ranks(&r.alpha_prime, n, &dims(r.composed.blocks())),
        alpha_prime_rank: r.alpha_prime.rank(),
        alpha_prime_target: r.alpha_prime.target_dim(),
    };
    if evidence.alpha_surjective() && evidence.alpha_prime_surjective() {
        let conclusion = format!(
            "the matrix rings of dimensions {} and {} are Morita equivalent",
            r.ring.dim(),
            r.composed_ring.dim()
        );
        Ok(EquivalenceCertificate { evidence, conclusion })
    } else {
        let reasons = evidence.failures();
        Err(Refusal { evidence, reasons })
    }
}
