//! Ideal N->M cloner states and their optimal fidelities.
use qiopa::channels::optimal_cloning_fidelity;
use qiopa::dynamics::{nm_clone_state, nm_clone_weights};

fn main() -> qiopa::Result<()> {
    for (n, m) in [(1, 2), (1, 3), (2, 3), (2, 5), (3, 6)] {
        let w = nm_clone_weights(n, m)?;
        let shown: Vec<String> = w.iter().map(|r| r.to_string()).collect();
        let state = nm_clone_state(n, m)?;
        println!(
            "N={n} M={m}  F = {}  weights [{}]  kets {}",
            optimal_cloning_fidelity(n as u64, m as u64)?,
            shown.join(", "),
            state.len()
        );
    }
    Ok(())
}
