// temporary probe
fn main() {
    use tomofeat::*;
    let n = 48;
    let alpha = 3.0 * 2.0 / n as f64;
    let spec = SamplingSpec::for_grid(36, 1.5).unwrap();
    let phantom = DiscPhantom::three_disc(n, 1.0).unwrap();
    let y = phantom.analytic_radon(&spec);
    let via_fbp = fbp_feature(&y, &FbpFilter::new(FbpKind::Log, alpha).unwrap(), n, 1.0).unwrap();
    let ulog = sample_filter(&FeatureKernel::LaplacianOfGaussian { alpha }, &spec).unwrap();
    for iters in [500usize, 2000, 8000] {
        let cfg = SolverConfig {
            lambda: 0.0, mu: 0.0, max_iters: iters,
            step: StepRule::AutoPowerIteration, record_objective: false,
        };
        let solved = fista(&y, &ulog, &cfg, n, 1.0).unwrap();
        let num: f64 = solved.feature_map.data().iter().zip(via_fbp.data())
            .map(|(a, b)| (a - b) * (a - b)).sum();
        let den: f64 = via_fbp.data().iter().map(|b| b * b).sum();
        // interior-only comparison
        let mut num_i = 0.0; let mut den_i = 0.0;
        for i in 0..n { for j in 0..n {
            let x = via_fbp.coord(j); let yy = via_fbp.coord(i);
            if x*x + yy*yy <= 0.8*0.8 {
                let d = solved.feature_map.at(0,i,j) - via_fbp.at(0,i,j);
                num_i += d*d; den_i += via_fbp.at(0,i,j).powi(2);
            }
        }}
        println!("iters {iters}: global {:.3e} interior {:.3e}",
            (num/den).sqrt(), (num_i/den_i).sqrt());
    }
}
