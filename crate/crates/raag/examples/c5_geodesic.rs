use raag::{Raag, SimplicialGraph};

fn main() {
    let r = Raag::new(SimplicialGraph::cycle(5));
    let path = r.complement_loop_path(&[0, 2, 4, 1, 3]).unwrap();
    let t = std::time::Instant::now();
    let check = r.verify_geodesic(&path);
    println!("{check:?} in {:?}", t.elapsed());
}
