//! Regenerates the JSON inputs bundled in `data/`.
//!
//! ```text
//! cargo run --example write_inputs [-- out_dir]
//! ```

use std::path::PathBuf;

use equibu::complexes::crosspolytope;
use equibu::cover_solvers::SetSpec;
use equibu::ham_sandwich::{random_cloud, ParabolaFamilies, SmoothedPointMeasure};
use serde_json::{json, Value};

fn mono(coef: f64, pow: &[u32]) -> Value {
    json!({"coef": coef, "pow": pow})
}

fn symmetric_cloud(r: f64) -> SmoothedPointMeasure {
    let pts = (0..12)
        .map(|k| {
            let t = k as f64 * std::f64::consts::PI / 6.0;
            vec![r * t.cos() + 1.0, r * t.sin() - 1.0]
        })
        .collect();
    SmoothedPointMeasure::uniform(pts).expect("nonempty")
}

fn main() -> anyhow::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&out)?;
    let write = |name: &str, v: Value| -> anyhow::Result<()> {
        std::fs::write(out.join(name), serde_json::to_string_pretty(&v)? + "\n")?;
        Ok(())
    };

    // complexes and labelings
    write("square.json", serde_json::to_value(crosspolytope(2)?.to_json())?)?;
    write("octahedron.json", serde_json::to_value(crosspolytope(3)?.to_json())?)?;
    write("id.json", json!({"1": 1, "2": 2, "-1": -1, "-2": -2}))?;
    write("mixed.json", json!({"1": 1, "2": -1, "-1": -1, "-2": 1}))?;

    // covers of S^2 by three caps and their antipodes
    let cap = |c: [f64; 3]| SetSpec::Cap { center: c.to_vec(), radius: 60.0, margin: 0.0 };
    let caps = vec![cap([1.0, 0.0, 0.0]), cap([0.0, 1.0, 0.0]), cap([0.0, 0.0, 1.0])];
    write("caps.json", serde_json::to_value(vec![caps])?)?;
    let arc = |from: f64, to: f64| SetSpec::Arc { from, to, margin: 0.0 };
    write("arc3.json", serde_json::to_value(vec![vec![arc(-70.0, 70.0)]])?)?;

    // polynomial fields: M_ij = x_{(i+j) mod 3}, an odd map on S^2, cos on S^1
    let entries: Vec<Vec<Value>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let mut pow = [0; 3];
                    pow[(i + j) % 3] = 1;
                    json!([mono(1.0, &pow)])
                })
                .collect()
        })
        .collect();
    write("field_bu.json", json!({"entries": entries}))?;
    write(
        "field_zero.json",
        json!({"components": [[mono(1.0, &[1]), mono(1.0, &[0, 0, 1])], [mono(1.0, &[0, 1]), mono(-1.0, &[1, 0, 2])]]}),
    )?;
    write("cos.json", json!({"components": [[mono(1.0, &[1])]]}))?;

    // simplex maps on the 2-simplex
    let coord = |k: usize| {
        let mut pow = [0; 3];
        pow[k] = 1;
        json!([mono(1.0, &pow)])
    };
    write("maps_identity.json", json!({"maps": [[coord(0), coord(1), coord(2)]]}))?;
    write("maps_e1.json", json!({"maps": [[[mono(1.0, &[])], [], []]]}))?;
    // x_i (1 + s (x_{i+1} - x_{i+2})) keeps every face and sums to one
    let twisted = |s: f64| -> Vec<Value> {
        (0..3)
            .map(|i| {
                let term = |k: usize, c: f64| {
                    let mut pow = [0; 3];
                    pow[i] += 1;
                    pow[k] += 1;
                    mono(c, &pow)
                };
                let mut pow = [0; 3];
                pow[i] = 1;
                json!([mono(1.0, &pow), term((i + 1) % 3, s), term((i + 2) % 3, -s)])
            })
            .collect()
    };
    write(
        "maps_colorful.json",
        json!({"maps": [[coord(0), coord(1), coord(2)], twisted(0.5), twisted(-0.5)]}),
    )?;

    // a contraction h(x) = (x + c)/2 of the simplex, copied into every row
    let c = [0.2, 0.3, 0.5];
    let row: Vec<Value> = (0..3)
        .map(|k| {
            let mut pow = [0; 3];
            pow[k] = 1;
            json!([mono(0.5, &pow), mono(0.5 * c[k], &[])])
        })
        .collect();
    write("brouwer.json", json!({"entries": [row.clone(), row.clone(), row]}))?;

    // measures
    let sym = vec![symmetric_cloud(1.0), symmetric_cloud(2.0), symmetric_cloud(3.0)];
    write("sym3.json", json!({"measures": sym}))?;
    let bisect = vec![random_cloud(&[-2.0, 0.0], 1.0, 20, 3)?, random_cloud(&[2.0, 1.0], 1.0, 20, 4)?];
    write("bisect.json", json!({"measures": bisect}))?;
    let sep = vec![random_cloud(&[-5.0, 0.0], 1.0, 60, 5)?, random_cloud(&[5.0, 0.0], 1.0, 60, 6)?];
    write("separated.json", json!({"measures": sep}))?;
    write("parabola.json", json!({"families": ParabolaFamilies::standard().families().families}))?;

    println!("wrote inputs to {}", out.display());
    Ok(())
}
