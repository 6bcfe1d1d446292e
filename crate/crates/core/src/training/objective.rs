//! Loss graphs for one critic update and one generator update.

use crate::autodiff::{argmax, gradient_penalty, Graph, GumbelNoise, Tensor, Var};
use crate::data::BlockLayout;
use crate::nn::{classifier_input, Classifier, ClassifierVars, Critic, CriticVars, Generator, GeneratorVars, NnError};
use crate::scalar::Scalar;

use super::penalty::{eod_penalty, sp_penalty};
use super::Variant;

/// `ε·real + (1−ε)·fake` with one `ε` per row (`eps` is `[m, 1]`).
pub fn interpolate<T: Scalar>(real: &Tensor<T>, fake: &Tensor<T>, eps: &Tensor<T>) -> Tensor<T> {
    assert_eq!(real.shape(), fake.shape());
    assert_eq!(eps.shape(), [real.rows(), 1]);
    Tensor::from_fn(real.rows(), real.cols(), |r, c| {
        let e = eps.get(r, 0);
        e * real.get(r, c) + (T::one() - e) * fake.get(r, c)
    })
}

pub struct CriticTerms {
    /// `mean C(D′) − mean C(D) + λ·mean (‖∇C(D̂)‖ − 1)²`.
    pub loss: Var,
    /// `mean C(D) − mean C(D′)`.
    pub wasserstein: Var,
    pub gradient_penalty: Var,
}

pub fn critic_objective<T: Scalar>(
    g: &mut Graph<T>,
    critic: &Critic<T>,
    vars: &CriticVars,
    real: &Tensor<T>,
    fake: &Tensor<T>,
    eps: &Tensor<T>,
    lambda_pen: T,
) -> Result<CriticTerms, NnError> {
    let x_hat = interpolate(real, fake, eps);
    let real = g.constant(real.clone());
    let fake = g.constant(fake.clone());
    let x_hat = g.constant(x_hat);
    let c_real = critic.forward(g, vars, real)?;
    let c_fake = critic.forward(g, vars, fake)?;
    let m_real = g.mean(c_real)?;
    let m_fake = g.mean(c_fake)?;
    let wasserstein = g.sub(m_real, m_fake)?;
    let grad = critic.input_gradient(g, vars, x_hat)?;
    let gp = gradient_penalty(g, grad, lambda_pen)?;
    let w_neg = g.sub(m_fake, m_real)?;
    let loss = g.add(w_neg, gp)?;
    Ok(CriticTerms {
        loss,
        wasserstein,
        gradient_penalty: gp,
    })
}

/// Frozen classifier and the penalty it feeds.
pub struct FairnessTerm<'a, T> {
    pub classifier: &'a Classifier<T>,
    pub vars: &'a ClassifierVars,
    pub layout: &'a BlockLayout,
    pub variant: Variant,
    pub lambda_fair: T,
}

pub struct GeneratorTerms {
    pub loss: Var,
    pub fake: Var,
    pub penalty: Option<Var>,
    pub soft_label: Option<Var>,
    pub privileged: Vec<bool>,
    pub positive: Vec<bool>,
}

/// Argmax membership of each generated row in one categorical block.
pub fn block_bits<T: Scalar>(x: &Tensor<T>, start: usize, width: usize, index: usize) -> Vec<bool> {
    (0..x.rows())
        .map(|r| argmax(&x.row(r)[start..start + width]) == index)
        .collect()
}

/// `−mean C(G(z))`, plus `λ_fair · penalty(I)` when `fairness` is set and
/// its variant is not `none`.
pub fn generator_objective<T: Scalar, N: GumbelNoise<T> + ?Sized>(
    g: &mut Graph<T>,
    generator: &Generator<T>,
    gvars: &GeneratorVars,
    critic: &Critic<T>,
    cvars: &CriticVars,
    z: Var,
    noise: &mut N,
    fairness: Option<FairnessTerm<'_, T>>,
) -> Result<GeneratorTerms, NnError> {
    let fake = generator.forward(g, gvars, z, noise, false)?;
    let scores = critic.forward(g, cvars, fake)?;
    let mean = g.mean(scores)?;
    let realism = g.scale(mean, -T::one())?;
    let mut terms = GeneratorTerms {
        loss: realism,
        fake,
        penalty: None,
        soft_label: None,
        privileged: Vec::new(),
        positive: Vec::new(),
    };
    let Some(f) = fairness.filter(|f| f.variant != Variant::None) else {
        return Ok(terms);
    };
    let values = g.value(fake);
    let pb = f.layout.protected_block();
    let lb = f.layout.label_block();
    terms.privileged = block_bits(values, pb.start, pb.width, f.layout.privileged_index);
    terms.positive = block_bits(values, lb.start, lb.width, f.layout.positive_index);
    let features = classifier_input(g, fake, f.layout)?;
    let i = f.classifier.soft_label(g, f.vars, features, noise)?;
    let penalty = match f.variant {
        Variant::Sp => sp_penalty(g, i, &terms.privileged)?,
        Variant::Eod => eod_penalty(g, i, &terms.privileged, &terms.positive)?,
        Variant::None => unreachable!(),
    };
    let weighted = g.scale(penalty, f.lambda_fair)?;
    terms.loss = g.add(realism, weighted)?;
    terms.penalty = Some(penalty);
    terms.soft_label = Some(i);
    Ok(terms)
}
