//! Decodes one noisy Silver-code transmission with the structured sphere
//! decoder and checks it against exhaustive search.

use rand_distr::{Distribution, StandardNormal};
use stbc_fsd::code::silver;
use stbc_fsd::decoder::{ml_oracle, Constellation, SphereDecoder};
use stbc_fsd::parallel::task_rng;
use stbc_fsd::structure::{equivalent_channel, predicted_pattern, ChannelModel};

fn main() -> stbc_fsd::Result<()> {
    let code = silver();
    let c = Constellation::new(4)?;
    let mut rng = task_rng(7, 0);
    let h = ChannelModel::new(2, 7).draw(code.n_t(), &mut rng);
    let h_eq = equivalent_channel(&code, &h)?;
    let pattern = predicted_pattern(&code);
    let decoder = SphereDecoder::new(&h_eq, &c, Some(&pattern))?;
    println!("plan: {:?}", decoder.plan());

    let sent: Vec<usize> = (0..code.dim()).map(|_| c.random_index(&mut rng)).collect();
    let s: Vec<f64> = sent.iter().map(|&k| c.level(k)).collect();
    let y: Vec<f64> = h_eq
        .mul_vec(&s)
        .into_iter()
        .map(|v| {
            let n: f64 = StandardNormal.sample(&mut rng);
            v + 0.3 * n
        })
        .collect();

    let fast = decoder.decode(&y)?;
    let ml = ml_oracle(&y, &h_eq, &c)?;
    println!("sent    {sent:?}");
    println!(
        "decoded {:?}  metric {:.4}  nodes {}  leaves {}",
        fast.indices, fast.metric, fast.nodes_visited, fast.leaves
    );
    println!(
        "oracle  {:?}  metric {:.4}  nodes {}",
        ml.indices, ml.metric, ml.nodes_visited
    );
    Ok(())
}
