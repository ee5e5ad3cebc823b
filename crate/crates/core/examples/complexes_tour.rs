//! Symmetric spheres: crosspolytopes, cyclic join spheres, deleted joins
//! and barycentric subdivision.

use equibu::complexes::{crosspolytope, deleted_join_simplex, find_isomorphism, zp_join_sphere};

fn main() -> anyhow::Result<()> {
    let oct = crosspolytope(3)?;
    println!("octahedron          f = {:?}", oct.complex().f_vector());
    for k in 1..=2 {
        let sd = oct.subdivide_times(k, usize::MAX)?;
        println!(
            "  subdivided {k}x      f = {:?}, chi = {}, mesh = {:.3}",
            sd.complex().f_vector(),
            sd.complex().euler_characteristic(),
            sd.mesh_size()
        );
    }

    for (p, d) in [(3, 1), (3, 2), (5, 1)] {
        let sc = zp_join_sphere(p, d)?;
        sc.check_free()?;
        println!(
            "Z/{p} join sphere d={d} f = {:?}, chi = {}",
            sc.complex().f_vector(),
            sc.complex().euler_characteristic()
        );
    }

    for n in 1..=3 {
        let dj = deleted_join_simplex(n, 2)?;
        let iso = find_isomorphism(&dj, crosspolytope(n + 1)?.complex());
        println!("deleted join of the {n}-simplex is a crosspolytope: {}", iso.is_some());
    }
    Ok(())
}
