//! The invariant suite behind `qeccov verify`: every module property checked
//! on seeded random instances, one [`Check`] per invariant.

use qeccov_core::channel::{apply, channel_of, choi_of, compose, stinespring, Builtin, KrausChannel};
use qeccov_core::covariance::{covariance_check, noncovariance, tradeoff, U1Spec};
use qeccov_core::gallery::{no_go_cases, no_go_outcome, repetition_bit_flips, repetition_code};
use qeccov_core::haar::{
    avg_infidelity_analytic, avg_noncovariance_analytic, first_factor_dephasing, mc_average, moment_check,
    sample_rng, MCEstimate, MomentItem, Quantity, SeededEnsemble,
};
use qeccov_core::linalg::{
    c, evolution, frobenius_norm, identity, kron, max_abs, numerical_rank, partial_trace, pauli_z, psd_sqrt,
    trace, trace_distance_fidelity_gap, trace_norm, ComplexMatrix, DensityMatrix, HermitianOperator,
};
use qeccov_core::qec::{infidelity, isometric_infidelity_via_skew, knill_laflamme, CodeNoisePair};
use qeccov_core::random::{
    ginibre, random_builtin_noise, random_channel, random_code_noise_pair, random_covariant_code,
    random_density, random_hermitian, random_isometry, random_orthogonal, random_orthonormal_hermitians,
    random_pure,
};
use qeccov_core::skew::{
    asymmetry_measure, skew_information, sum_uncertainty_check, variance, LieAlgebraBasis,
};
use qeccov_core::tol;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::error::CliError;
use crate::report::Check;

type Result<T> = std::result::Result<T, CliError>;

/// Seed and tolerance scale shared by every invariant.
#[derive(Debug, Clone, Copy)]
pub struct Suite {
    pub seed: u64,
    /// Multiplies every allowed deviation.
    pub scale: f64,
}

impl Suite {
    pub fn new(seed: u64, scale: f64) -> Self {
        Self { seed, scale }
    }

    fn rng(&self, stream: u64) -> ChaCha20Rng {
        sample_rng(self.seed, stream)
    }

    /// Every invariant at its documented instance count.
    pub fn run_all(&self) -> Result<Vec<Check>> {
        let mut out = vec![self.psd_sqrt_squares(200)?];
        out.extend(self.norm_relations(200)?);
        out.push(self.fidelity_chain(1000)?);
        out.push(self.partial_trace_preserves_trace(100)?);
        out.push(self.choi_round_trip(100)?);
        out.push(self.stinespring_builtins()?);
        out.push(self.compose_associative(50)?);
        out.push(self.sum_uncertainty(200)?);
        out.push(self.pure_skew_is_variance(100)?);
        out.push(self.skew_below_variance(1000)?);
        out.push(self.asymmetry_convex(100)?);
        out.push(self.asymmetry_basis_independent(100)?);
        out.extend(self.oracle_and_chain(50)?);
        out.extend(self.knill_laflamme_zero()?);
        out.push(self.skew_identity(100)?);
        out.push(self.no_go()?);
        out.push(self.tradeoff_slack(200)?);
        out.push(self.noncovariance_detects_covariance(100)?);
        out.push(self.noncovariance_unitarily_invariant(100)?);
        out.push(self.moments(10_000, &[2, 3, 4], 5.0)?);
        out.push(self.worker_count_determinism()?);
        out.extend(self.trivial_ancilla_consistency(2000)?);
        out.push(self.average_decreasing()?);
        out.extend(self.documented_averages(2000)?);
        Ok(out)
    }

    pub fn psd_sqrt_squares(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(1);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d = rng.random_range(2..=6);
            let rho = random_density(d, rng.random_range(1..=d), &mut rng);
            let s = psd_sqrt(&rho)?;
            worst = worst.max(max_abs(&(&s * &s - rho.matrix())));
        }
        Ok(Check::at_most(
            "linalg: psd_sqrt(rho)^2 = rho",
            worst,
            1e-9 * self.scale,
        ))
    }

    /// `‖M‖₂ ≤ ‖M‖₁ ≤ √rank ‖M‖₂`, excesses relative to `‖M‖₂`.
    pub fn norm_relations(&self, instances: usize) -> Result<[Check; 2]> {
        let mut rng = self.rng(2);
        let (mut lower, mut upper) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for _ in 0..instances {
            let (r, k, cols) = (
                rng.random_range(1..=5),
                rng.random_range(1..=5),
                rng.random_range(1..=5),
            );
            let m = ginibre(r, k, &mut rng) * ginibre(k, cols, &mut rng);
            let (one, two) = (trace_norm(&m), frobenius_norm(&m));
            let rank = numerical_rank(&m) as f64;
            lower = lower.max((two - one) / two);
            upper = upper.max((one - rank.sqrt() * two) / two);
        }
        Ok([
            Check::at_most("linalg: ||M||_1 >= ||M||_2", lower, 1e-9 * self.scale),
            Check::at_most(
                "linalg: ||M||_1 <= sqrt(rank M) ||M||_2",
                upper,
                1e-9 * self.scale,
            ),
        ])
    }

    pub fn fidelity_chain(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(3);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..instances {
            let d = rng.random_range(2..=6);
            let rho = random_density(d, rng.random_range(1..=d), &mut rng);
            let sigma = random_density(d, rng.random_range(1..=d), &mut rng);
            let g = trace_distance_fidelity_gap(&rho, &sigma)?;
            let t = g.trace_distance;
            worst = worst
                .max((1.0 - t) - g.fidelity)
                .max(g.fidelity - (1.0 - t * t).max(0.0).sqrt());
        }
        Ok(Check::at_most(
            "linalg: 1 - T <= F <= sqrt(1 - T^2)",
            worst,
            1e-9 * self.scale,
        ))
    }

    pub fn partial_trace_preserves_trace(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(4);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let dims: Vec<usize> = (0..rng.random_range(2..=3))
                .map(|_| rng.random_range(1..=3))
                .collect();
            let total: usize = dims.iter().product();
            let rho = random_density(total, total, &mut rng);
            let keep: Vec<usize> = (0..dims.len()).filter(|_| rng.random_bool(0.5)).collect();
            let reduced = partial_trace(rho.matrix(), &dims, &keep)?;
            worst = worst.max((trace(&reduced) - trace(rho.matrix())).norm());
        }
        Ok(Check::at_most(
            "linalg: partial trace preserves the trace",
            worst,
            1e-12 * self.scale,
        ))
    }

    pub fn choi_round_trip(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(5);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d_in: usize = rng.random_range(1..=3);
            let d_out = rng.random_range(1..=3);
            let n = rng.random_range(d_in.div_ceil(d_out)..=4);
            let ch = random_channel(d_in, d_out, n, &mut rng);
            let back = channel_of(&choi_of(&ch));
            for _ in 0..3 {
                let rho = random_density(d_in, d_in, &mut rng);
                worst = worst.max(max_abs(
                    &(apply(&ch, &rho)?.matrix() - apply(&back, &rho)?.matrix()),
                ));
            }
        }
        Ok(Check::at_most(
            "channel: choi_of / channel_of round trip",
            worst,
            1e-8 * self.scale,
        ))
    }

    pub fn stinespring_builtins(&self) -> Result<Check> {
        let mut rng = self.rng(6);
        let builtins = [
            Builtin::Identity { d: 3 },
            Builtin::Dephasing { p: 0.3 },
            Builtin::BitFlip { p: 0.2 },
            Builtin::Depolarizing { p: 0.7 },
            Builtin::AmplitudeDamping { gamma: 0.6 },
            Builtin::SingleSite {
                inner: Box::new(Builtin::AmplitudeDamping { gamma: 0.25 }),
                site: 1,
                n_qubits: 2,
            },
        ];
        let mut worst: f64 = 0.0;
        for b in &builtins {
            let ch = b.channel()?;
            let dil = stinespring(&ch);
            let v = dil.isometry.matrix();
            for _ in 0..3 {
                let rho = random_density(ch.d_in(), ch.d_in(), &mut rng);
                let big = v * rho.matrix() * v.adjoint();
                let reduced = partial_trace(&big, &[ch.d_out(), dil.d_e], &[0])?;
                worst = worst.max(max_abs(&(reduced - apply(&ch, &rho)?.matrix())));
            }
        }
        Ok(Check::at_most(
            "channel: Stinespring trace-out reproduces every builtin",
            worst,
            1e-10 * self.scale,
        ))
    }

    pub fn compose_associative(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(7);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d: Vec<usize> = (0..4).map(|_| rng.random_range(1..=3)).collect();
            let mut chan = |i: usize, o: usize| -> KrausChannel {
                let n = rng.random_range(i.div_ceil(o)..=3);
                random_channel(i, o, n, &mut rng)
            };
            let c0 = chan(d[0], d[1]);
            let b = chan(d[1], d[2]);
            let a = chan(d[2], d[3]);
            let left = compose(&compose(&a, &b)?, &c0)?;
            let right = compose(&a, &compose(&b, &c0)?)?;
            let rho = random_density(d[0], d[0], &mut rng);
            worst = worst.max(max_abs(
                &(apply(&left, &rho)?.matrix() - apply(&right, &rho)?.matrix()),
            ));
        }
        Ok(Check::at_most(
            "channel: compose is associative",
            worst,
            1e-10 * self.scale,
        ))
    }

    /// Smallest `Σ_j I(ρ, K_j) − I(ρ, Σ_j K_j)/N`.
    pub fn sum_uncertainty(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(8);
        let mut slack = f64::INFINITY;
        for _ in 0..instances {
            let d = rng.random_range(2..=5);
            let rho = random_density(d, rng.random_range(1..=d), &mut rng);
            let ks: Vec<ComplexMatrix> = (0..rng.random_range(1..=5))
                .map(|_| ginibre(d, d, &mut rng))
                .collect();
            let chk = sum_uncertainty_check(&rho, &ks)?;
            slack = slack.min(chk.lhs - chk.rhs);
        }
        Ok(Check::at_least(
            "skew: sum uncertainty relation (slack)",
            slack,
            -1e-10 * self.scale,
        ))
    }

    pub fn pure_skew_is_variance(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(9);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d = rng.random_range(2..=5);
            let psi = random_pure(d, &mut rng).density();
            let h = random_hermitian(d, &mut rng);
            worst = worst.max((skew_information(&psi, &h)? - variance(&psi, &h)?).abs());
        }
        Ok(Check::at_most(
            "skew: pure-state skew information = variance",
            worst,
            1e-9 * self.scale,
        ))
    }

    pub fn skew_below_variance(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(10);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..instances {
            let d = rng.random_range(2..=5);
            let rho = random_density(d, rng.random_range(1..=d), &mut rng);
            let h = random_hermitian(d, &mut rng);
            worst = worst.max(skew_information(&rho, &h)? - variance(&rho, &h)?);
        }
        Ok(Check::at_most(
            "skew: skew information <= variance (excess)",
            worst,
            1e-9 * self.scale,
        ))
    }

    pub fn asymmetry_convex(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(11);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..instances {
            let d = rng.random_range(2..=4);
            let basis = LieAlgebraBasis::new("random", random_orthonormal_hermitians(d, 2, &mut rng))?;
            let parts = rng.random_range(2..=4);
            let states: Vec<DensityMatrix> = (0..parts).map(|_| random_density(d, d, &mut rng)).collect();
            let raw: Vec<f64> = (0..parts).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let mix = DensityMatrix::mixture(&weights, &states)?;
            let mut rhs = 0.0;
            for (w, s) in weights.iter().zip(&states) {
                rhs += w * asymmetry_measure(s, &basis)?;
            }
            worst = worst.max(asymmetry_measure(&mix, &basis)? - rhs);
        }
        Ok(Check::at_most(
            "skew: asymmetry measure is convex (excess)",
            worst,
            1e-9 * self.scale,
        ))
    }

    pub fn asymmetry_basis_independent(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(12);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d = rng.random_range(2..=4);
            let k = rng.random_range(2..=4);
            let gens: Vec<ComplexMatrix> = random_orthonormal_hermitians(d, k, &mut rng)
                .into_iter()
                .map(HermitianOperator::into_matrix)
                .collect();
            let o = random_orthogonal(k, &mut rng);
            let rotated: Vec<HermitianOperator> = (0..k)
                .map(|p| {
                    let m = (0..k).fold(ComplexMatrix::zeros(d, d), |acc, q| {
                        acc + &gens[q] * c(o[(p, q)], 0.0)
                    });
                    HermitianOperator::new(m)
                })
                .collect::<std::result::Result<_, _>>()?;
            let plain = gens
                .into_iter()
                .map(HermitianOperator::new)
                .collect::<std::result::Result<_, _>>()?;
            let rho = random_density(d, rng.random_range(1..=d), &mut rng);
            let a = asymmetry_measure(&rho, &LieAlgebraBasis::new("plain", plain)?)?;
            let b = asymmetry_measure(&rho, &LieAlgebraBasis::new("rotated", rotated)?)?;
            worst = worst.max((a - b).abs());
        }
        Ok(Check::at_most(
            "skew: asymmetry measure is basis independent",
            worst,
            1e-9 * self.scale,
        ))
    }

    /// Closed form vs oracle, the bound chain, `ρ_R = 1/d_L` and the fidelity
    /// bound, all on the same random instances.
    pub fn oracle_and_chain(&self, instances: usize) -> Result<[Check; 4]> {
        let mut rng = self.rng(13);
        let mut rel: f64 = 0.0;
        let mut slack = f64::INFINITY;
        let mut rho_r: f64 = 0.0;
        let mut fid = f64::NEG_INFINITY;
        for _ in 0..instances {
            let pair = random_code_noise_pair(&mut rng);
            let rep = infidelity(&pair)?;
            rel = rel.max(rep.oracle_relative_error());
            let ch = &rep.chain;
            slack = slack
                .min(ch.half_1norm - ch.one_minus_fid)
                .min(ch.scaled_2norm - ch.half_1norm);
            let d_l = pair.d_l();
            let mixed = identity(d_l) / c(d_l as f64, 0.0);
            rho_r = rho_r.max(max_abs(&(rep.complementary.rho_r.matrix() - mixed)));
            fid = fid.max(1.0 - rep.complementary.fid_product - rep.epsilon);
        }
        Ok([
            Check::at_most(
                "qec: closed-form epsilon = complementary oracle (relative)",
                rel,
                1e-9 * self.scale,
            ),
            Check::at_least(
                "qec: 1 - F <= T <= sqrt(d_L d_E)/2 ||.||_2 (slack)",
                slack,
                -1e-9 * self.scale,
            ),
            Check::at_most("qec: rho_R = 1/d_L", rho_r, 1e-12 * self.scale),
            Check::at_most("qec: 1 - fid_product <= epsilon (excess)", fid, 1e-9 * self.scale),
        ])
    }

    pub fn knill_laflamme_zero(&self) -> Result<[Check; 2]> {
        let w = repetition_code();
        let noise = repetition_bit_flips();
        let kl = knill_laflamme(&w.projector(), &noise, tol::KNILL_LAFLAMME * self.scale)?;
        let eps = infidelity(&CodeNoisePair::isometric(&w, noise)?)?.epsilon;
        Ok([
            Check::holds("qec: repetition code passes Knill-Laflamme for bit flips", kl.ok),
            Check::at_most("qec: Knill-Laflamme code has epsilon = 0", eps, 1e-9 * self.scale),
        ])
    }

    /// `4 d_L ε²/n = d_L Σ I(|ψ̃⟩⟨ψ̃|, 1 ⊗ K_ij)` on random isometric codes.
    pub fn skew_identity(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(14);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d_l = rng.random_range(2..=3);
            let d_s = d_l * rng.random_range(1..=2);
            let w = random_isometry(d_l, d_s, &mut rng);
            let noise = random_channel(d_s, d_s, rng.random_range(1..=4), &mut rng);
            let id = isometric_infidelity_via_skew(&w, &noise)?;
            worst = worst.max((id.lhs - id.rhs).abs());
        }
        Ok(Check::at_most(
            "qec: infidelity as skew information",
            worst,
            1e-9 * self.scale,
        ))
    }

    /// Number of fixture combinations passing, against at least 10 and all of them.
    pub fn no_go(&self) -> Result<Check> {
        let cases = no_go_cases()?;
        let mut passed = 0usize;
        for case in &cases {
            if no_go_outcome(case)?.passed {
                passed += 1;
            }
        }
        Ok(Check::at_least(
            "covariance: covariant codes under HKS noise have epsilon > 1e-6",
            passed as f64,
            cases.len().max(10) as f64,
        ))
    }

    pub fn tradeoff_slack(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(15);
        let mut slack = f64::INFINITY;
        for _ in 0..instances {
            let n_qubits = rng.random_range(1..=2);
            let d_s = 1 << n_qubits;
            let d_l = if n_qubits == 1 { 2 } else { rng.random_range(2..=4) };
            let w = random_isometry(d_l, d_s, &mut rng);
            let noise = random_builtin_noise(n_qubits, &mut rng);
            let spec = U1Spec::new(random_hermitian(d_l, &mut rng), random_hermitian(d_s, &mut rng))?;
            slack = slack.min(tradeoff(&w, &noise, &spec)?.slack);
        }
        Ok(Check::at_least(
            "covariance: trade-off slack",
            slack,
            -1e-9 * self.scale,
        ))
    }

    /// Counts instances where `N < 1e-9` and `covariance_check` disagree.
    pub fn noncovariance_detects_covariance(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(16);
        let mut disagreements = 0usize;
        for i in 0..instances {
            let d_l = rng.random_range(1..=2);
            let d_s = d_l * rng.random_range(1..=3);
            let (spec, ch) = if i % 2 == 0 {
                let (spec, w) = random_covariant_code(d_l, d_s, &mut rng);
                (spec, KrausChannel::from_isometry(&w))
            } else {
                let spec = U1Spec::new(random_hermitian(d_l, &mut rng), random_hermitian(d_s, &mut rng))?;
                (spec, random_channel(d_l, d_s, rng.random_range(1..=3), &mut rng))
            };
            let n = noncovariance(&ch, &spec)?;
            let chk = covariance_check(&ch, &spec, tol::COVARIANCE * self.scale)?;
            if (n < 1e-9 * self.scale) != chk.covariant || (i % 2 == 0 && !chk.covariant) {
                disagreements += 1;
            }
        }
        Ok(Check::at_most(
            "covariance: noncovariance = 0 exactly when the channel is covariant",
            disagreements as f64,
            0.0,
        ))
    }

    pub fn noncovariance_unitarily_invariant(&self, instances: usize) -> Result<Check> {
        let mut rng = self.rng(17);
        let mut worst: f64 = 0.0;
        for _ in 0..instances {
            let d_l = rng.random_range(1..=3);
            let d_s = rng.random_range(d_l..=4);
            let ch = random_channel(d_l, d_s, rng.random_range(1..=3), &mut rng);
            let spec = U1Spec::new(random_hermitian(d_l, &mut rng), random_hermitian(d_s, &mut rng))?;
            let u = evolution(spec.h_combined(), rng.random_range(-3.0..3.0));
            let choi = choi_of(&ch);
            let before = asymmetry_measure(choi.state(), spec.basis().combined())?;
            let after = asymmetry_measure(&choi.state().conjugated_by(&u)?, spec.basis().combined())?;
            worst = worst.max((before - after).abs() / before.max(1.0));
        }
        Ok(Check::at_most(
            "covariance: noncovariance invariant under the symmetry evolution",
            worst,
            1e-9 * self.scale,
        ))
    }

    /// Worst `|z|` over all four Haar integrals and dimensions.
    pub fn moments(&self, samples: usize, dims: &[usize], sigmas: f64) -> Result<Check> {
        let mut worst: f64 = 0.0;
        let mut all = true;
        for &d in dims {
            for item in MomentItem::ALL {
                let chk = moment_check(item, d, samples, self.seed, sigmas * self.scale)?;
                worst = worst.max(chk.max_z);
                all &= chk.passed;
            }
        }
        let mut check = Check::at_most(
            "haar: Haar moment closed forms match Monte Carlo (max |z|)",
            worst,
            sigmas * self.scale,
        );
        check.passed = all;
        Ok(check)
    }

    pub fn worker_count_determinism(&self) -> Result<Check> {
        let ens = SeededEnsemble::new(2, 2, self.seed, 200)?;
        let q = Quantity::InfidelitySq {
            noise: first_factor_dephasing(4)?,
        };
        let run = |threads: usize| -> Result<MCEstimate> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(pool.install(|| mc_average(&q, &ens))?)
        };
        let one = run(1)?;
        let four = run(4)?;
        let same = one.mean.to_bits() == four.mean.to_bits() && one.stderr.to_bits() == four.stderr.to_bits();
        Ok(Check::holds(
            "haar: estimates are bit-identical for 1 and 4 workers",
            same,
        ))
    }

    /// With `d_A = 1` the prefactor is one and the only code is `W = U`.
    pub fn trivial_ancilla_consistency(&self, samples: usize) -> Result<[Check; 2]> {
        let mut rng = self.rng(18);
        let mut worst: f64 = 0.0;
        let mut z: f64 = 0.0;
        for d in 2..=4 {
            let noise = random_channel(d, d, rng.random_range(1..=3), &mut rng);
            let n = noise.len() as f64;
            let mut sum = 0.0;
            for ai in noise.kraus() {
                for aj in noise.kraus() {
                    let b = ai.adjoint() * aj;
                    sum += trace(&(b.adjoint() * &b)).re - trace(&b).norm_sqr() / d as f64;
                }
            }
            let direct = n / (4.0 * d as f64) * sum;
            let analytic = avg_infidelity_analytic(&noise, d, d)?;
            worst = worst.max((direct - analytic).abs());
            let est = mc_average(
                &Quantity::InfidelitySq { noise },
                &SeededEnsemble::new(d, 1, self.seed, samples)?,
            )?;
            z = z.max(est.z_score.abs());
        }
        Ok([
            Check::at_most(
                "haar: d_A = 1 average has unit prefactor",
                worst,
                1e-12 * self.scale,
            ),
            Check::at_most(
                "haar: d_A = 1 Monte Carlo matches the average (|z|)",
                z,
                3.0 * self.scale,
            ),
        ])
    }

    pub fn average_decreasing(&self) -> Result<Check> {
        let mut values = Vec::new();
        for d_s in [4, 8, 16] {
            values.push(avg_infidelity_analytic(&first_factor_dephasing(d_s)?, 2, d_s)?);
        }
        let worst_step = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut check = Check::at_most(
            "haar: average infidelity decreases over d_S = 4, 8, 16",
            worst_step,
            0.0,
        );
        check.passed = worst_step < 0.0;
        Ok(check)
    }

    /// Average `ε²` for first-factor dephasing (`d_L = 2`, `d_S = 4`) and average
    /// noncovariance for `H_L = Z`, `H_S = Z ⊗ 1`: analytic values and MC.
    pub fn documented_averages(&self, samples: usize) -> Result<[Check; 4]> {
        let eps = mc_average(
            &Quantity::InfidelitySq {
                noise: first_factor_dephasing(4)?,
            },
            &SeededEnsemble::new(2, 2, self.seed, samples)?,
        )?;
        let spec = documented_u1()?;
        let analytic_n = avg_noncovariance_analytic(spec.h_l(), spec.h_s())?;
        let noncov = mc_average(
            &Quantity::Noncovariance { spec },
            &SeededEnsemble::new(2, 2, self.seed, samples)?,
        )?;
        Ok([
            Check::at_most(
                "haar: average infidelity^2 = 1/10",
                (eps.analytic - 0.1).abs(),
                1e-12 * self.scale,
            ),
            Check::at_most(
                "haar: Monte Carlo infidelity^2 average (|z|)",
                eps.z_score.abs(),
                3.0 * self.scale,
            ),
            Check::at_most(
                "haar: average noncovariance = 29/15",
                (analytic_n - 29.0 / 15.0).abs(),
                1e-12 * self.scale,
            ),
            Check::at_most(
                "haar: Monte Carlo noncovariance average (|z|)",
                noncov.z_score.abs(),
                3.0 * self.scale,
            ),
        ])
    }
}

/// `H_L = Z`, `H_S = Z ⊗ 1`.
pub fn documented_u1() -> Result<U1Spec> {
    Ok(U1Spec::new(
        HermitianOperator::new(pauli_z())?,
        HermitianOperator::new(kron(&pauli_z(), &identity(2)))?,
    )?)
}
