use hidden_partition::cluster::{match_partitions, Partition};
use hidden_partition::model::{presets, sample_graph};
use hidden_partition::svdpart::svd2_run;

fn main() -> hidden_partition::Result<()> {
    let model = presets::bipartition(1000, 0.5, 0.2)?;
    let graph = sample_graph(&model, 7);
    let result = svd2_run::<f64>(&graph, 2, 7)?;

    // Only the held-out column set is labeled by a single run.
    let truth = Partition::from_membership(model.membership()).restrict(result.partition.domain());
    let report = match_partitions(&result.partition, &truth)?;
    println!("misclassified {} of {}", report.misclassified_count, result.split.y2.len());
    println!("{}", result.metadata());
    Ok(())
}
