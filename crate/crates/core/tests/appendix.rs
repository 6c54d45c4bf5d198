//! Specialized matrices for n = 7 and n = 8 against the published grids and
//! the checked-in goldens. `COMMUTANT_BLESS=1` rewrites the goldens.

use commutant::polycore::{Poly, Ring, VarId};
use commutant::sop::{AppendixFixture, APPENDIX_GOLDENS};

// Entry `ab` stands for `x_ab`; `0` for zero.
const N7_X: &str = "0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 | 41 42 43 0 45 46 47 | 51 52 53 54 0 0 0 | 0 0 0 64 0 0 0 | 0 0 0 74 0 0 0";
const N7_Y: &str = "0 0 0 47 51 0 0 | 0 0 0 46 52 0 0 | 0 0 0 45 53 0 0 | 0 0 0 0 54 64 74 | 0 0 0 43 0 0 0 | 0 0 0 42 0 0 0 | 0 0 0 41 0 0 0";
const N8_X: &str = "0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 | 41 42 43 0 0 46 47 48 | 51 52 53 54 0 56 0 0 | 0 0 0 64 65 0 0 0 | 0 0 0 74 0 0 0 0 | 0 0 0 84 0 0 0 0";
const N8_Y: &str = "0 0 0 48 51 0 0 0 | 0 0 0 47 52 0 0 0 | 0 0 0 46 53 0 0 0 | 0 0 0 0 54 65 74 84 | 0 0 0 0 0 64 0 0 | 0 0 0 43 56 0 0 0 | 0 0 0 42 0 0 0 0 | 0 0 0 41 0 0 0 0";
const N8C2_X: &str = "0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 | 41 42 0 0 0 46 47 48 | 51 52 53 54 0 56 0 0 | 0 0 63 64 65 0 0 0 | 0 0 0 74 0 0 0 0 | 0 0 0 84 0 0 0 0";
const N8C2_Y: &str = "0 0 0 48 51 0 0 0 | 0 0 0 47 52 0 0 0 | 0 0 0 0 56 63 0 0 | 0 0 0 0 54 65 74 84 | 0 0 0 0 0 64 0 0 | 0 0 0 46 53 0 0 0 | 0 0 0 42 0 0 0 0 | 0 0 0 41 0 0 0 0";

fn grid(ring: Ring, s: &str) -> Vec<Vec<Poly>> {
    s.split('|')
        .map(|row| {
            row.split_whitespace()
                .map(|e| match e {
                    "0" => Poly::zero(ring),
                    ab => {
                        let b = ab.as_bytes();
                        Poly::var(ring, VarId::x(b[0] - b'0', b[1] - b'0')).unwrap()
                    }
                })
                .collect()
        })
        .collect()
}

fn check_against_grid(n: u8, ch: u32, xs: &str, ys: &str) {
    let f = AppendixFixture::generate(n, ch).unwrap();
    let ring = Ring::new(n, ch).unwrap();
    for (name, m, g) in [("X", &f.x, grid(ring, xs)), ("Y", &f.y, grid(ring, ys))] {
        for (i, row) in g.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(m.get(i + 1, j + 1), want, "n={n} char={ch} {name}[{}][{}]", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn n7_matches_published_grid() {
    check_against_grid(7, 0, N7_X, N7_Y);
}

#[test]
fn n8_matches_published_grid() {
    check_against_grid(8, 0, N8_X, N8_Y);
    check_against_grid(8, 3, N8_X, N8_Y);
}

#[test]
fn n8_char2_matches_published_grid() {
    check_against_grid(8, 2, N8C2_X, N8C2_Y);
}

#[test]
fn goldens_byte_identical() {
    let bless = std::env::var_os("COMMUTANT_BLESS").is_some();
    for (file, n, ch, golden) in APPENDIX_GOLDENS {
        let fresh = AppendixFixture::generate(n, ch).unwrap().to_json();
        if bless {
            let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(file);
            std::fs::write(path, &fresh).unwrap();
            continue;
        }
        assert_eq!(fresh, golden, "{file} drifted");
        let v: serde_json::Value = serde_json::from_str(golden).unwrap();
        assert_eq!(v["X"].as_array().unwrap().len(), n as usize);
    }
}
