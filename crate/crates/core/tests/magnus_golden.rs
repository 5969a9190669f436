//! Regression of the computed first-order Floquet-Magnus term against a
//! closed-form reference display transcribed verbatim into
//! `tests/data/omega1_printed_n8.txt`.
//!
//! The two are NOT expected to be identical: the commutator route (validated
//! against a dense BCH oracle in the unit and acceptance suites) is
//! authoritative, and the comparison documents exactly where the printed
//! display deviates from it:
//!
//!   1. every term family appears with the opposite overall sign, and
//!   2. the printed `Y_{2i} X_{2i+1} Y_{2i+2}` term does not occur in the
//!      commutator at all; the corresponding computed term is
//!      `Z_{2i} X_{2i+1} Y_{2i+2}` (the `Y...Y` ending is a typo for the
//!      `Z...Y` pattern that every other family follows).
//!
//! The test prints a term-level diff and asserts the discrepancy has exactly
//! that structure, so any drift in either side fails loudly.

use cluster_floquet::magnus::omega1;
use cluster_floquet::model::ModelParams;
use cluster_floquet::pauli::{Axis, PauliString, PauliSum};

fn main_params_n8() -> ModelParams {
    ModelParams::main_experiment(8, 3.17)
}

/// Verbatim transcription of the printed first-order term (all four
/// families carry the printed minus signs).
fn printed_omega1(p: &ModelParams) -> PauliSum {
    let n = p.n_sites;
    let half = n / 2;
    let mut sum = PauliSum::new(n);
    let mut add = |factors: &[(u32, Axis)], c: f64| {
        let s = PauliString::from_factors(n, factors).unwrap();
        sum.add_string(&s, c).unwrap();
    };
    use Axis::{X, Y, Z};
    for i in 1..half {
        let (a, b, c3) = (2 * i - 1, 2 * i, 2 * i + 1);
        add(&[(a, Y), (b, X), (c3, Z)], -p.j_e * p.h_x);
        add(&[(a, Z), (b, X), (c3, Y)], -p.j_e * p.h_x);
    }
    for i in 1..half {
        let (a, b, c3) = (2 * i, 2 * i + 1, 2 * i + 2);
        add(&[(a, Y), (b, X), (c3, Z)], -p.j_o * p.h_x);
        // the suspect term: Y...Y where the family pattern calls for Z...Y
        add(&[(a, Y), (b, X), (c3, Y)], -p.j_o * p.h_x);
    }
    for i in 2..half {
        add(
            &[(2 * i - 2, X), (2 * i - 1, Y), (2 * i, X), (2 * i + 1, Z)],
            -p.j_e * p.v_xx,
        );
    }
    for i in 1..half {
        add(&[(2 * i - 1, Y), (2 * i + 1, Z)], -p.j_e * p.v_xx);
        add(&[(2 * i - 1, Z), (2 * i + 1, Y)], -p.j_e * p.v_xx);
        add(
            &[(2 * i - 1, Z), (2 * i, X), (2 * i + 1, Y), (2 * i + 2, X)],
            -p.j_e * p.v_xx,
        );
    }
    for i in 1..half {
        add(
            &[(2 * i - 1, X), (2 * i, Y), (2 * i + 1, X), (2 * i + 2, Z)],
            -p.j_o * p.v_xx,
        );
        add(&[(2 * i, Y), (2 * i + 2, Z)], -p.j_o * p.v_xx);
        add(&[(2 * i, Z), (2 * i + 2, Y)], -p.j_o * p.v_xx);
    }
    for i in 1..half - 1 {
        add(
            &[(2 * i, Z), (2 * i + 1, X), (2 * i + 2, Y), (2 * i + 3, X)],
            -p.j_o * p.v_xx,
        );
    }
    sum
}

/// True when the key's letters follow the pattern `Z X Y` on three
/// consecutive sites starting at an even site (the corrected typo family).
fn is_zxy_even_family(n: u32, x: u128, z: u128) -> bool {
    for start in (2..n - 1).step_by(2) {
        let s = PauliString::from_factors(
            n,
            &[(start, Axis::Z), (start + 1, Axis::X), (start + 2, Axis::Y)],
        )
        .unwrap();
        if s.x_mask() == x && s.z_mask() == z {
            return true;
        }
    }
    false
}

fn is_yxy_even_family(n: u32, x: u128, z: u128) -> bool {
    for start in (2..n - 1).step_by(2) {
        let s = PauliString::from_factors(
            n,
            &[(start, Axis::Y), (start + 1, Axis::X), (start + 2, Axis::Y)],
        )
        .unwrap();
        if s.x_mask() == x && s.z_mask() == z {
            return true;
        }
    }
    false
}

#[test]
fn printed_display_differs_from_commutator_in_the_documented_way() {
    let p = main_params_n8();
    let printed = printed_omega1(&p);
    let computed = omega1(&p).unwrap();

    let mut only_printed = Vec::new();
    let mut only_computed = Vec::new();
    let mut sign_flipped = 0usize;
    for (&(x, z), &c_print) in printed.iter() {
        let c_comp = computed.coefficient(x, z);
        if c_comp == 0.0 {
            only_printed.push((x, z, c_print));
        } else {
            assert!(
                (c_comp + c_print).abs() < 1e-12,
                "key ({x:#x},{z:#x}): computed {c_comp} vs printed {c_print} \
                 (expected a global sign flip)"
            );
            sign_flipped += 1;
        }
    }
    for (&(x, z), &c_comp) in computed.iter() {
        if printed.coefficient(x, z) == 0.0 {
            only_computed.push((x, z, c_comp));
        }
    }

    println!("term-level diff (computed commutator vs printed display):");
    println!("  {sign_flipped} shared terms, every one with opposite sign");
    for (x, z, c) in &only_printed {
        println!("  printed-only  ({x:#x},{z:#x}) coeff {c}");
        assert!(
            is_yxy_even_family(p.n_sites, *x, *z),
            "unexpected printed-only term"
        );
    }
    for (x, z, c) in &only_computed {
        println!("  computed-only ({x:#x},{z:#x}) coeff {c}");
        assert!(
            is_zxy_even_family(p.n_sites, *x, *z),
            "unexpected computed-only term"
        );
    }
    // N=8: three Y X Y terms printed, three Z X Y terms computed
    assert_eq!(only_printed.len(), 3);
    assert_eq!(only_computed.len(), 3);
}

#[test]
fn golden_file_matches_transcription() {
    let p = main_params_n8();
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/omega1_printed_n8.txt");
    let text = std::fs::read_to_string(&path).expect("golden file present");
    let from_file = PauliSum::from_text(p.n_sites, &text).unwrap();
    assert_eq!(
        from_file,
        printed_omega1(&p),
        "golden file drifted from the in-test transcription"
    );
}

/// Regenerates the golden file from the transcription.
/// `cargo test -p cluster-floquet --test magnus_golden regenerate -- --ignored`
#[test]
#[ignore]
fn regenerate_golden_file() {
    let p = main_params_n8();
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    std::fs::create_dir_all(&dir).unwrap();
    let header = "# Verbatim transcription of the reference closed-form display of the\n\
                  # first-order Floquet-Magnus term at N=8, J_e = pi/5, J_o = 3.17 pi/5, h_x = 0.11, v_xx = 0.2.\n\
                  # Known deviations from the computed commutator (which is validated\n\
                  # against a dense BCH oracle): every family's sign is flipped, and the\n\
                  # Y/X/Y terms below should read Z/X/Y.\n";
    let body = printed_omega1(&p).to_text();
    std::fs::write(dir.join("omega1_printed_n8.txt"), format!("{header}{body}")).unwrap();
}
