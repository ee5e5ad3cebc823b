//! Fan certificates on labelled symmetric spheres.

use equibu::complexes::{crosspolytope, zp_join_sphere};
use equibu::fan_core::{random_labeling, solve_fan_z2, solve_fan_zp, SignedLabeling};
use equibu::complexes::VertexId;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    // the square with the identity labeling: a facet carrying +1 and +2
    let square = crosspolytope(2)?;
    let id = SignedLabeling([(1, 1), (2, 2), (-1, -1), (-2, -2)].into_iter().map(|(v, l)| (VertexId(v), l)).collect());
    println!("square, identity:   {:?}", solve_fan_z2(&square, &id, &[1, 1])?);

    // random antipodal labelings of the twice subdivided octahedron
    let sphere = crosspolytope(3)?.subdivide_times(2, usize::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for signs in [[1, 1, 1], [1, -1, 1]] {
        let l = random_labeling(&sphere, 3, &mut rng);
        let cert = solve_fan_z2(&sphere, &l.to_signed().expect("Z/2 labeling"), &signs)?;
        println!("octahedron, signs {signs:?}: verified = {}", cert.verify(&l, &signs.map(equibu::fan_core::sign_to_excluded)));
    }

    // Z/3 on the once subdivided join sphere
    let sc = zp_join_sphere(3, 1)?.subdivide_times(1, usize::MAX)?;
    let l = random_labeling(&sc, 1, &mut rng);
    println!("Z/3 join sphere:    {:?}", solve_fan_zp(&sc, &l, &[0])?);
    Ok(())
}
