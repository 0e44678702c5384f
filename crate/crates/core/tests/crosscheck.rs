//! Cross-validation of the statistics kernel against reference values
//! computed independently with scipy/statsmodels and a hand-written
//! Swamy-Arora implementation. The datasets and expected numbers are
//! frozen here; regenerating them requires only the standard Python
//! scientific stack.

// frozen reference digits exceed f64 precision on purpose
#![allow(clippy::excessive_precision)]

use mcvi_core::stats;

const TIE_X: [f64; 7] = [1.2, 3.4, 2.2, 5.5, 4.1, 0.7, 3.3];
const TIE_Y: [f64; 7] = [2.1, 0.4, 3.3, 1.1, 5.0, 2.1, 4.4];

#[test]
fn spearman_matches_scipy() {
    // scipy.stats.spearmanr
    let c = stats::spearman(&TIE_X, &TIE_Y).unwrap();
    assert!(
        (c.coefficient - (-0.054056247761734)).abs() < 1e-12,
        "rho {}",
        c.coefficient
    );
    assert!(
        (c.p_value - 0.908365282523996).abs() < 1e-9,
        "p {}",
        c.p_value
    );
}

#[test]
fn pearson_matches_scipy() {
    // scipy.stats.pearsonr (beta-distribution p equals the two-sided t
    // transform used here)
    let c = stats::pearson(&TIE_X, &TIE_Y).unwrap();
    assert!(
        (c.coefficient - 0.003371064435781).abs() < 1e-12,
        "r {}",
        c.coefficient
    );
    assert!(
        (c.p_value - 0.994277135787677).abs() < 1e-9,
        "p {}",
        c.p_value
    );
}

#[test]
fn mann_whitney_matches_scipy() {
    // scipy.stats.mannwhitneyu(method='asymptotic', use_continuity=True)
    let a = [1.0, 2.0, 2.0, 5.0, 7.0];
    let b = [2.0, 3.0, 3.0, 6.0, 8.0, 9.0];
    let res = stats::mann_whitney(&a, &b).unwrap();
    assert_eq!(res.u, 8.0);
    assert!(
        (res.p_value - 0.229963800685730).abs() < 1e-9,
        "p {}",
        res.p_value
    );
}

#[test]
fn linear_trend_matches_scipy() {
    // scipy.stats.linregress
    let series: Vec<(f64, f64)> = [
        0.516, 0.514, 0.511, 0.509, 0.508, 0.507, 0.505, 0.502, 0.500, 0.498,
    ]
    .iter()
    .enumerate()
    .map(|(i, &y)| ((2006 + i) as f64, y))
    .collect();
    let fit = stats::linear_trend(&series).unwrap();
    assert!(
        (fit.slope - (-0.001927272727273)).abs() < 1e-12,
        "slope {}",
        fit.slope
    );
    assert!(
        (fit.intercept - 4.381781818181822).abs() < 1e-9,
        "intercept {}",
        fit.intercept
    );
    assert!(
        (fit.r_squared - 0.988504398826980).abs() < 1e-12,
        "r2 {}",
        fit.r_squared
    );
}

#[test]
fn clustered_ols_matches_statsmodels_cr1() {
    // statsmodels OLS with cov_type='cluster' (CR1), 36 obs in 6 clusters
    let x1 = [
        0.97484845985254032,
        2.8212437385553422,
        2.7420238283158245,
        0.85952814669461497,
        2.3454078545584935,
        1.971766788526164,
        1.58843022989159,
        1.0057132839552889,
        2.1699599359817281,
        1.5861306915543034,
        1.7807610569130903,
        0.39577188589448076,
        1.4792398734539456,
        0.56111717510692816,
        0.060574454715329074,
        2.8884024548082481,
        1.8959965804917591,
        1.9092017439507725,
        2.3828918316845398,
        1.8682685518532487,
        0.99926209393101417,
        0.8865429382829515,
        1.4128525235518901,
        0.30759409832967499,
        2.4400119835190037,
        2.0504325698209489,
        0.062225429244272767,
        2.5430899363254453,
        0.64802560116855701,
        2.7682210746638218,
        1.7269319356092163,
        0.60432026428928098,
        2.9252913431685181,
        2.2371100723106498,
        1.3601725741171151,
        1.0712552714543295,
    ];
    let x2 = [
        1.1997759503607361,
        -1.3435336319357527,
        0.37703369332723946,
        0.86495411061456673,
        -0.036592071133148094,
        1.003940327010201,
        0.33918592961967498,
        0.45486041380725389,
        0.050360609382877973,
        0.93181985089816255,
        0.11742571346693627,
        0.6552930675213734,
        1.6955661788832286,
        2.2504444704657467,
        0.21069681743897278,
        -1.5531535798682619,
        2.3016707965890424,
        0.30739992290299106,
        0.17140069470287039,
        -1.1466603714375385,
        -0.33827921830176777,
        -0.2516791430482353,
        0.34725991110274357,
        -0.56944788429065218,
        -0.79028475766871575,
        1.0422401736078768,
        0.3840303187762138,
        1.1236571075022055,
        1.656953425320794,
        -0.15777873085439958,
        0.083608458781465708,
        -1.09271793842397,
        0.039911985403419614,
        1.0011658767004463,
        0.20791272892433602,
        -1.7238345925132781,
    ];
    let y = [
        0.46883757193079534,
        5.2703410412112097,
        3.614433826251275,
        0.79278184022513465,
        4.2444192952506494,
        1.8612270203112244,
        1.8705676803805416,
        1.3020636581621516,
        3.6029157911278888,
        2.1560385415971979,
        2.6308915008909439,
        0.87504016838417908,
        1.0089343899955543,
        -1.0712749155918007,
        0.36068943036243178,
        5.5030187054038553,
        0.87347373379180504,
        2.4997309423698093,
        3.2558452606094446,
        4.0946813161696003,
        2.5446465879688143,
        1.9100931312274203,
        2.7390478228128625,
        1.6594956469823512,
        2.6011134061328232,
        1.3976407365036856,
        -0.7955863604667236,
        1.6897447795189779,
        -1.5003850255834377,
        3.5469024163996008,
        2.6557174498722578,
        2.2442242864499149,
        3.8047638778649331,
        2.30408629301487,
        2.2729487897339413,
        2.9946977086747402,
    ];
    let clusters: Vec<usize> = (0..36).map(|i| i / 6).collect();
    let res = stats::ols_clustered(&y, &[("x1", &x1), ("x2", &x2)], &clusters).unwrap();
    let expected_beta = [0.499658584471680, 1.198395536670292, -0.958638295204572];
    let expected_se = [0.211616003159683, 0.064415035410589, 0.072237852697206];
    for i in 0..3 {
        assert!(
            (res.coefficients[i] - expected_beta[i]).abs() < 1e-10,
            "beta[{i}] {} vs {}",
            res.coefficients[i],
            expected_beta[i]
        );
        assert!(
            (res.std_errors[i] - expected_se[i]).abs() < 1e-10,
            "se[{i}] {} vs {}",
            res.std_errors[i],
            expected_se[i]
        );
    }
}

#[test]
fn random_effects_and_hausman_match_reference() {
    // balanced panel, N=8, T=6; reference from an independent Python
    // Swamy-Arora implementation (balanced case: harmonic mean = T)
    let x = [
        -0.32801465769746957,
        -0.34170202891521501,
        0.16822583892916637,
        -0.078047376304761162,
        0.56748823404605742,
        0.20508529170306106,
        -0.058763088839779765,
        -0.18828555488357313,
        -0.4716823107324738,
        -0.36728298218388633,
        -0.51761426962447687,
        -0.55409976826400598,
        0.3318060015134493,
        0.1343203136966323,
        0.55206883941493079,
        0.82396635532668716,
        0.56349673238038989,
        0.19427685226437771,
        -0.46209542504989487,
        0.1743787378400502,
        -0.41665411109917028,
        -0.12516859177399708,
        -0.12352991265589242,
        -0.041650796115152877,
        1.3483362813703978,
        0.82902584823441816,
        1.3398130610416992,
        1.7116005128875034,
        1.5856170929802635,
        0.93856749473031498,
        0.9854857519236766,
        1.3016366371094881,
        1.4157511799555955,
        1.1531105289586807,
        1.4587234250588708,
        0.88124408885780825,
        1.3013153862467828,
        1.2942268214400299,
        1.2156741558169615,
        1.5353336249672442,
        0.85869834257497279,
        1.4247525626027113,
        -0.82898089599548286,
        -0.84710561318801803,
        -0.74179575701695599,
        -1.1643722464452053,
        -0.77606681712282766,
        -0.26908280345132751,
    ];
    let y = [
        -1.4939820095813956,
        -1.6856372354850631,
        -1.3793135755505812,
        -0.69323674117367962,
        0.26724777646259079,
        -0.3096136890207638,
        -1.2068894394547773,
        -1.9139433650541677,
        -2.311804041118108,
        -1.3730644842620059,
        -2.1906591647490936,
        -1.755024440344449,
        1.2259968606521641,
        -0.25344816954207966,
        1.3789212240469966,
        1.394051906637644,
        0.50339061946100994,
        -0.24776486150078902,
        -1.7689289098547818,
        -0.51691500165800541,
        -2.618121867477079,
        -0.81166646432589939,
        -1.3579880793755157,
        -1.3453036953902733,
        3.9370863065953809,
        3.0219723362233641,
        4.299386644404664,
        4.9845796177536092,
        4.3298694294524163,
        2.8880386881195581,
        3.4433179639839349,
        3.6148618005567172,
        3.7912523110682055,
        4.4395936621664536,
        4.1680504176840341,
        3.0981919106487643,
        4.3323848683375754,
        4.1957659107760845,
        4.376079820386142,
        4.2464894949036589,
        3.2330564633004735,
        3.6808182392928597,
        -3.3741347110024478,
        -4.7886328874475561,
        -3.9222617842888123,
        -5.0453311120915512,
        -3.8764402517367604,
        -1.7622878837044009,
    ];
    let entities: Vec<usize> = (0..48).map(|i| i / 6).collect();

    let fe = stats::fixed_effects(&y, &[("x", &x)], &entities).unwrap();
    assert!(
        (fe.coefficients[0] - 2.178471921142707).abs() < 1e-10,
        "fe {}",
        fe.coefficients[0]
    );

    let re = stats::random_effects(&y, &[("x", &x)], &entities).unwrap();
    assert_eq!(re.names, vec!["const", "x"]);
    assert!(
        (re.coefficients[0] - (-0.744081528842784)).abs() < 1e-9,
        "re const {}",
        re.coefficients[0]
    );
    assert!(
        (re.coefficients[1] - 3.556378671691972).abs() < 1e-9,
        "re slope {}",
        re.coefficients[1]
    );
    assert!(
        (re.std_errors[1] - 0.109597206600345).abs() < 1e-9,
        "re se {}",
        re.std_errors[1]
    );
    assert!(!re.variance_floored);

    let h = stats::hausman(&fe, &re).unwrap();
    assert_eq!(h.dof, 1);
    assert!(
        (h.statistic - 34.243131614583938).abs() < 1e-6,
        "H {}",
        h.statistic
    );
    assert!(
        (h.p_value - 0.000000004863890).abs() < 1e-9,
        "p {}",
        h.p_value
    );
}

#[test]
fn jacobi_matches_numpy_eigenvalues() {
    // numpy.linalg.eigvalsh of a fixed symmetric 4x4 matrix
    let matrix: Vec<Vec<f64>> = vec![
        vec![4.0, 1.0, 0.5, 0.2],
        vec![1.0, 3.0, 0.3, 0.1],
        vec![0.5, 0.3, 2.0, 0.4],
        vec![0.2, 0.1, 0.4, 1.0],
    ];
    let (values, vectors) = stats::eigen_symmetric(&matrix).unwrap();
    let expected = [
        4.766339371741690,
        2.382602385609992,
        1.991633490669666,
        0.859424751978652,
    ];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-10, "{v} vs {e}");
    }
    // eigenpair residual: A q == lambda q
    for (lambda, q) in values.iter().zip(&vectors) {
        for i in 0..4 {
            let aq: f64 = (0..4).map(|j| matrix[i][j] * q[j]).sum();
            assert!((aq - lambda * q[i]).abs() < 1e-9);
        }
    }
}
