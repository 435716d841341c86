//! Uniform, graded and geometric meshes and the quantities derived from them.

use vsbdf2::mesh::TimeMesh;

fn describe(name: &str, mesh: &TimeMesh) {
    let stats = mesh.stats();
    println!(
        "{name:<22} N={:<3} k1={:.3e} k_max={:.4} r_max={:.4} Phi_N={:.4}",
        mesh.n_steps(),
        mesh.first_step(),
        stats.k_max,
        stats.r_max,
        stats.phi_final()
    );
}

fn main() -> vsbdf2::Result<()> {
    describe("uniform T=4", &TimeMesh::uniform(4.0, 50)?);
    describe("graded T=4 grading=3", &TimeMesh::graded(4.0, 20, 3.0)?);
    describe("geometric T=4 r=2.4", &TimeMesh::geometric(4.0, 50, 2.4)?);

    let graded = TimeMesh::graded(4.0, 20, 3.0)?;
    let head: Vec<String> = graded
        .ratios()
        .iter()
        .take(6)
        .map(|r| format!("{r:.4}"))
        .collect();
    println!("graded ratios r_2.. = {} ...", head.join(", "));

    // r = 1 has its own constructor
    if let Err(e) = TimeMesh::geometric(1.0, 10, 1.0) {
        println!("geometric r=1: {e}");
    }

    // custom meshes travel as one node per line
    let custom = TimeMesh::from_nodes(vec![0.0, 0.5, 1.5, 2.0, 3.0])?;
    print!("{}", custom.to_node_list());
    assert_eq!(TimeMesh::from_node_list(&custom.to_node_list())?, custom);
    Ok(())
}
