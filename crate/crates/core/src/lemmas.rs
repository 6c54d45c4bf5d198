//! Binomial identities mod p behind the `n = 3, 4` F-purity arguments, and
//! the closed form for the `n = 4` target coefficient.
//!
//! Sums are taken over exact integers and reduced at the end; only
//! [`binom_mod`] uses Lucas' theorem.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::is_prime;

fn require_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrimeField(p))
    }
}

fn require_odd_prime(p: u32) -> Result<()> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported("needs an odd prime".into()));
    }
    Ok(())
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binom_mod(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    acc as u32
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::polycore::mod_pow(den, p - 2, p) % p
}

pub fn binom_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ parts)! / ∏ parts!`.
pub fn multinomial_exact(parts: &[u64]) -> BigUint {
    let mut total = 0;
    let mut acc = BigUint::one();
    for &k in parts {
        total += k;
        acc *= binom_exact(total, k);
    }
    acc
}

fn reduce(v: &BigInt, p: u32) -> u32 {
    v.mod_floor(&BigInt::from(p)).to_u32().expect("residue below p")
}

fn sign_mod(odd: bool, p: u32) -> u32 {
    if odd {
        p - 1
    } else {
        1 % p
    }
}

/// `C(p−i, k) ≡ (−1)^{i−1}·C(p−1−k, i−1)·C(p−1, k)` for all `1 ≤ i ≤ p−1`,
/// `0 ≤ k ≤ p−i`.
pub fn claim_check(p: u32) -> Result<bool> {
    require_prime(p)?;
    let pp = p as u64;
    for i in 1..pp {
        for k in 0..=pp - i {
            let lhs = (binom_exact(pp - i, k) % pp).to_u64().unwrap();
            let rhs = binom_mod(pp - 1 - k, i - 1, p) as u64 * binom_mod(pp - 1, k, p) as u64 % pp;
            let rhs = if (i - 1) % 2 == 1 { (pp - rhs) % pp } else { rhs };
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A_b = Σ_{a=b}^{p−1−b} C(a+b, a)·C(a, b)` over the integers.
pub fn lemma_ab_exact(b: u64, p: u32) -> Result<BigUint> {
    require_odd_prime(p)?;
    let p = p as u64;
    if b > (p - 1) / 2 {
        return Err(Error::Unsupported(format!("A_b needs b <= (p-1)/2, got {b}")));
    }
    Ok((b..=p - 1 - b).map(|a| binom_exact(a + b, a) * binom_exact(a, b)).sum())
}

pub fn lemma_ab(b: u64, p: u32) -> Result<u32> {
    Ok((lemma_ab_exact(b, p)? % p).to_u32().unwrap())
}

/// `Σ_{b=0}^{(p−1)/2} (−1)^b·A_b mod p`.
pub fn lemma_signed_sum(p: u32) -> Result<u32> {
    require_odd_prime(p)?;
    let mut acc = BigInt::zero();
    for b in 0..=(p as u64 - 1) / 2 {
        let a = BigInt::from(lemma_ab_exact(b, p)?);
        if b % 2 == 0 {
            acc += a;
        } else {
            acc -= a;
        }
    }
    Ok(reduce(&acc, p))
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRow {
    pub p: u32,
    /// `A_b ≡ 0` for every `b ≤ (p−3)/2`.
    pub lower_ab_vanish: bool,
    pub a_half: u32,
    /// `(−1)^{(p−1)/2} mod p`.
    pub a_half_expected: u32,
    pub a_half_ok: bool,
    pub signed_sum: u32,
    /// The value stated for the signed sum, `(−1)^{(p−1)/2} mod p`.
    pub stated_value: u32,
    pub matches_stated: bool,
    pub claim: bool,
}

pub fn lemma_row(p: u32) -> Result<LemmaRow> {
    require_odd_prime(p)?;
    let half = (p as u64 - 1) / 2;
    let lower_ab_vanish = (0..half).map(|b| lemma_ab(b, p)).collect::<Result<Vec<_>>>()?.iter().all(|&v| v == 0);
    let a_half = lemma_ab(half, p)?;
    let expected = sign_mod(half % 2 == 1, p);
    let signed_sum = lemma_signed_sum(p)?;
    Ok(LemmaRow {
        p,
        lower_ab_vanish,
        a_half,
        a_half_expected: expected,
        a_half_ok: a_half == expected,
        signed_sum,
        stated_value: expected,
        matches_stated: signed_sum == expected,
        claim: claim_check(p)?,
    })
}

/// Rows for every odd prime up to `pmax`.
pub fn lemma_table(pmax: u32) -> Result<Vec<LemmaRow>> {
    crate::polycore::primes_up_to(pmax as u64)
        .into_iter()
        .filter(|&p| p > 2)
        .map(|p| lemma_row(p as u32))
        .collect()
}

/// Exponents of one term of `ω^{p−1}` for the `n = 4` system, one
/// multinomial expansion per factor of `ω`:
///
/// ```text
/// 1: (x21y12)^α1 (x24y42)^β1 (−x32y23)^γ1 (−x42y24)^δ1
/// 2: (x21y13)^α2 (x24y43)^β2 (−x43y24)^γ2
/// 3: (x31y12)^α3 (x34y42)^β3 (−x42y34)^γ3
/// 4: (x31y13)^α4 (x32y23)^β4 (x34y43)^γ4 (−x43y34)^δ4
/// 5: (x21y12)^α5 (x31y13)^β5
/// 6: (x24y12)^α6 (x34y13)^β6
/// 7: (x21y42)^α7 (x31y43)^β7
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExponentSolution {
    pub alpha: [u64; 7],
    pub beta: [u64; 7],
    pub gamma: [u64; 4],
    pub delta1: u64,
    pub delta4: u64,
}

impl ExponentSolution {
    /// The two-parameter family; `None` when an entry would be negative.
    pub fn from_params(beta1: u64, beta2: u64, p: u32) -> Option<ExponentSolution> {
        let q = p as u64 - 1;
        let s = beta1 + beta2;
        let rest = q.checked_sub(s + beta2)?;
        Some(ExponentSolution {
            alpha: [0, 0, 0, 0, s, q - s, q - s],
            beta: [beta1, beta2, beta2, s, q - s, s, s],
            gamma: [q - s, q - beta2, q - beta2, rest],
            delta1: beta2,
            delta4: beta2,
        })
    }

    pub fn beta1(&self) -> u64 {
        self.beta[0]
    }

    pub fn beta2(&self) -> u64 {
        self.beta[1]
    }

    /// Per-factor exponent lists, in the order of the module table.
    pub fn factor_parts(&self) -> [Vec<u64>; 7] {
        let (a, b, g) = (&self.alpha, &self.beta, &self.gamma);
        [
            vec![a[0], b[0], g[0], self.delta1],
            vec![a[1], b[1], g[1]],
            vec![a[2], b[2], g[2]],
            vec![a[3], b[3], g[3], self.delta4],
            vec![a[4], b[4]],
            vec![a[5], b[5]],
            vec![a[6], b[6]],
        ]
    }

    /// Every `A_ij`, `B_ij` and `C_k`, by name.
    pub fn constraints(&self) -> Vec<(&'static str, u64)> {
        let (a, b, g) = (&self.alpha, &self.beta, &self.gamma);
        let (d1, d4) = (self.delta1, self.delta4);
        vec![
            ("A21", a[0] + a[1] + a[4] + a[6]),
            ("A24", a[5] + b[0] + b[1]),
            ("A31", a[2] + a[3] + b[4] + b[6]),
            ("A32", b[3] + g[0]),
            ("A34", b[2] + b[5] + g[3]),
            ("A42", g[2] + d1),
            ("A43", g[1] + d4),
            ("B12", a[0] + a[2] + a[4] + a[5]),
            ("B13", a[1] + a[3] + b[4] + b[5]),
            ("B23", b[3] + g[0]),
            ("B24", g[1] + d1),
            ("B34", g[2] + d4),
            ("B42", a[6] + b[0] + b[2]),
            ("B43", b[1] + b[6] + g[3]),
            ("C1", a[0] + b[0] + g[0] + d1),
            ("C2", a[1] + b[1] + g[1]),
            ("C3", a[2] + b[2] + g[2]),
            ("C4", a[3] + b[3] + g[3] + d4),
            ("C5", a[4] + b[4]),
            ("C6", a[5] + b[5]),
            ("C7", a[6] + b[6]),
        ]
    }

    pub fn satisfies(&self, p: u32) -> bool {
        self.constraints().iter().all(|&(_, v)| v == p as u64 - 1)
    }

    /// Signed product of the seven multinomials: this term's contribution
    /// to the coefficient of `∏ v^{p−1}`.
    pub fn contribution(&self) -> BigInt {
        let odd = (self.gamma[0] + self.delta1 + self.gamma[1] + self.gamma[2] + self.delta4) % 2 == 1;
        let mag: BigUint = self.factor_parts().iter().map(|parts| multinomial_exact(parts)).product();
        let v = BigInt::from(mag);
        if odd {
            -v
        } else {
            v
        }
    }
}

/// All solutions with `0 ≤ β₂ ≤ (p−1)/2`, `0 ≤ β₁ ≤ p−1−2β₂`, each checked
/// against the full constraint system.
pub fn n4_solutions(p: u32) -> Result<Vec<ExponentSolution>> {
    require_odd_prime(p)?;
    let q = p as u64 - 1;
    let mut out = Vec::new();
    for beta2 in 0..=q / 2 {
        for beta1 in 0..=q - 2 * beta2 {
            let s = ExponentSolution::from_params(beta1, beta2, p)
                .ok_or_else(|| Error::Inconsistent(format!("negative exponent at β1={beta1}, β2={beta2}")))?;
            if let Some((name, v)) = s.constraints().into_iter().find(|&(_, v)| v != q) {
                return Err(Error::Inconsistent(format!("β1={beta1}, β2={beta2}: {name} = {v} != {q}")));
            }
            if s.alpha[..4].iter().any(|&a| a != 0) {
                return Err(Error::Inconsistent("α1..α4 must vanish".into()));
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// The target coefficient summed term by term over [`n4_solutions`].
pub fn n4_closed_form(p: u32) -> Result<u32> {
    let total: BigInt = n4_solutions(p)?.iter().map(|s| s.contribution()).sum();
    Ok(reduce(&total, p))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainForm {
    pub label: String,
    pub value: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct N4Chain {
    pub p: u32,
    pub solutions: usize,
    pub closed_form: u32,
    /// The displayed forms of the coefficient, each summed exactly.
    pub forms: Vec<ChainForm>,
    pub signed_sum: u32,
    pub all_equal: bool,
}

/// Evaluates each displayed simplification of the `n = 4` coefficient as
/// its own exact double sum over `(β₁, β₂)`.
pub fn n4_chain(p: u32) -> Result<N4Chain> {
    require_odd_prime(p)?;
    let q = p as u64 - 1;
    let c = |n: u64, k: u64| BigInt::from(binom_exact(n, k));
    let m = |parts: &[u64]| BigInt::from(multinomial_exact(parts));
    type Term = fn(&dyn Fn(u64, u64) -> BigInt, &dyn Fn(&[u64]) -> BigInt, u64, u64, u64) -> (bool, BigInt);
    let forms: [(&str, Term); 6] = [
        ("E0", |c, m, q, b1, b2| {
            let s = b1 + b2;
            let v = m(&[b1, b2, q - s]) * c(q, b2).pow(2) * c(q, s).pow(3) * m(&[s, b2, q - s - b2]);
            (s % 2 == 1, v)
        }),
        ("E1", |c, m, q, b1, b2| {
            let s = b1 + b2;
            (s % 2 == 1, c(q, s) * m(&[b1, b2, q - s]) * m(&[s, b2, q - s - b2]))
        }),
        ("E2", |c, m, q, b1, b2| {
            let s = b1 + b2;
            (s % 2 == 1, c(q, s).pow(2) * m(&[b1, b2, b2, q - s - b2]))
        }),
        ("E3", |_, m, q, b1, b2| ((b1 + b2) % 2 == 1, m(&[b1, b2, b2, q - b1 - 2 * b2]))),
        ("E4", |c, m, q, b1, b2| ((b1 + b2) % 2 == 1, c(q, b1 + 2 * b2) * m(&[b1, b2, b2]))),
        ("E5", |_, m, _, b1, b2| (b2 % 2 == 1, m(&[b1, b2, b2]))),
    ];

    let mut out = Vec::new();
    for (label, term) in forms {
        let mut acc = BigInt::zero();
        for b2 in 0..=q / 2 {
            for b1 in 0..=q - 2 * b2 {
                let (neg, v) = term(&c, &m, q, b1, b2);
                if neg {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
        }
        out.push(ChainForm { label: label.into(), value: reduce(&acc, p) });
    }
    let closed_form = n4_closed_form(p)?;
    let signed_sum = lemma_signed_sum(p)?;
    let all_equal = out.iter().all(|f| f.value == closed_form) && signed_sum == closed_form;
    Ok(N4Chain { p, solutions: n4_solutions(p)?.len(), closed_form, forms: out, signed_sum, all_equal })
}

/// `(−1)^k` as a residue, exposed for table checks.
pub fn neg_one_pow(k: u64, p: u32) -> u32 {
    sign_mod(k % 2 == 1, p)
}
