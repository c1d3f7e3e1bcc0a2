"""Clipped-surrogate policy optimization over collected transitions.

The update maximizes

    mean(min(r * A, clip(r, 1-eps, 1+eps) * A))
        - value_coef * mean((V - R)^2)
        + entropy_coef * mean(H)

with r the new/old probability ratio and A the GAE advantage computed
per episode (done flags cut the recursion). Advantages are not
normalized, so the surrogate at the collection point equals the mean
advantage exactly, which the identity tests rely on. Gradients feed
separate Adam optimizers for actor and critic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import SatkitError
from .network import Adam
from .policy import Policy, masked_log_softmax


class NonFiniteLossError(SatkitError):
    """A loss went non-finite; the update was rolled back."""


@dataclass
class Transition:
    observation: np.ndarray  # flattened
    action: int
    log_prob: float
    reward: float
    value: float
    done: bool
    mask: np.ndarray  # legal-action mask at decision time


@dataclass
class UpdateMetrics:
    policy_loss: float  # negated mean clipped surrogate
    value_loss: float
    entropy: float
    clip_fraction: float


def clipped_surrogate(ratio: np.ndarray, advantage: np.ndarray, eps: float) -> np.ndarray:
    """Elementwise min(r*A, clip(r, 1-eps, 1+eps)*A)."""
    ratio = np.asarray(ratio, dtype=np.float64)
    advantage = np.asarray(advantage, dtype=np.float64)
    return np.minimum(ratio * advantage, np.clip(ratio, 1.0 - eps, 1.0 + eps) * advantage)


def compute_gae(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    discount: float,
    lam: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and value targets.

    Episodes terminate at done flags with no bootstrapping; a truncated
    tail (batch ending mid-episode) is treated the same way.
    """
    n = len(rewards)
    advantages = np.zeros(n, dtype=np.float64)
    next_value = 0.0
    next_advantage = 0.0
    for t in range(n - 1, -1, -1):
        live = 0.0 if dones[t] else 1.0
        delta = rewards[t] + discount * next_value * live - values[t]
        next_advantage = delta + discount * lam * live * next_advantage
        advantages[t] = next_advantage
        next_value = values[t]
    return advantages, advantages + values


def _batch_arrays(batch: Sequence[Transition]):
    obs = np.stack([t.observation for t in batch])
    actions = np.array([t.action for t in batch], dtype=np.int64)
    old_logp = np.array([t.log_prob for t in batch], dtype=np.float64)
    rewards = np.array([t.reward for t in batch], dtype=np.float64)
    values = np.array([t.value for t in batch], dtype=np.float64)
    dones = np.array([t.done for t in batch], dtype=bool)
    masks = np.stack([t.mask for t in batch])
    return obs, actions, old_logp, rewards, values, dones, masks


class PpoOptimizer:
    """Stateful updater: owns the Adam moments and the minibatch rng."""

    def __init__(self, policy: Policy, seed: Optional[int] = None):
        self.policy = policy
        cfg = policy.config
        self.actor_opt = Adam(policy.actor.parameters(), cfg.learning_rate)
        self.critic_opt = Adam(policy.critic.parameters(), cfg.learning_rate)
        self.rng = np.random.default_rng(policy.seed if seed is None else seed)

    def update(self, batch: Sequence[Transition]) -> UpdateMetrics:
        if not batch:
            raise ValueError("empty transition batch")
        cfg = self.policy.config
        obs, actions, old_logp, rewards, values, dones, masks = _batch_arrays(batch)
        advantages, returns = compute_gae(
            rewards, values, dones, cfg.discount, cfg.gae_lambda
        )

        snapshot = (
            self.policy.actor.copy_parameters(),
            self.policy.critic.copy_parameters(),
            self.actor_opt.state(),
            self.critic_opt.state(),
        )
        totals = np.zeros(4)
        steps = 0
        n = len(batch)
        try:
            for _ in range(cfg.epochs):
                order = self.rng.permutation(n)
                for start in range(0, n, cfg.minibatch_size):
                    idx = order[start : start + cfg.minibatch_size]
                    metrics = self._step(
                        obs[idx],
                        actions[idx],
                        old_logp[idx],
                        advantages[idx],
                        returns[idx],
                        masks[idx],
                    )
                    totals += metrics
                    steps += 1
        except NonFiniteLossError:
            self.policy.actor.set_parameters(snapshot[0])
            self.policy.critic.set_parameters(snapshot[1])
            self.actor_opt.restore(snapshot[2])
            self.critic_opt.restore(snapshot[3])
            raise
        mean = totals / steps
        return UpdateMetrics(*mean)

    def _step(self, obs, actions, old_logp, advantages, returns, masks) -> np.ndarray:
        metrics, actor_grads, critic_grads = ppo_loss_and_grads(
            self.policy, obs, actions, old_logp, advantages, returns, masks
        )
        if not np.isfinite(metrics[:3]).all():
            raise NonFiniteLossError("non-finite loss in update step")
        self.actor_opt.step(self.policy.actor.parameters(), actor_grads)
        self.critic_opt.step(self.policy.critic.parameters(), critic_grads)
        return metrics


def ppo_loss_and_grads(
    policy: Policy,
    obs: np.ndarray,
    actions: np.ndarray,
    old_logp: np.ndarray,
    advantages: np.ndarray,
    returns: np.ndarray,
    masks: np.ndarray,
) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Losses and analytic gradients for one minibatch, without stepping.

    The scalar being descended is
        policy_loss + value_coef * value_loss - entropy_coef * entropy,
    returned metrics are [policy_loss, value_loss, entropy, clip_fraction].
    """
    cfg = policy.config
    batch_size = len(obs)
    rows = np.arange(batch_size)
    obs = policy.preprocess(obs)

    logits, actor_cache = policy.actor.forward(obs)
    logp_all = masked_log_softmax(logits, masks)
    safe_logp = np.where(masks, logp_all, 0.0)
    probs = np.exp(safe_logp) * masks
    logp = logp_all[rows, actions]

    ratio = np.exp(logp - old_logp)
    surr1 = ratio * advantages
    surr2 = np.clip(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * advantages
    surrogate = np.minimum(surr1, surr2)
    entropy = -(probs * safe_logp).sum(axis=1)

    value_pred, critic_cache = policy.critic.forward(obs)
    value_pred = value_pred[:, 0]
    value_err = value_pred - returns
    value_loss = float(np.mean(value_err**2))
    policy_loss = -float(surrogate.mean())
    mean_entropy = float(entropy.mean())

    # d(-surrogate)/d logp: the clipped branch has zero gradient.
    active = surr1 <= surr2
    coef = np.where(active, ratio * advantages, 0.0) / batch_size
    one_hot = np.zeros_like(logp_all)
    one_hot[rows, actions] = 1.0
    grad_logits = -coef[:, None] * (one_hot - probs)
    # entropy bonus: dH/dz = -p * (log p + H)
    grad_logits -= (
        cfg.entropy_coef * (-(probs * (safe_logp + entropy[:, None]))) / batch_size
    )
    grad_logits = np.where(masks, grad_logits, 0.0)
    actor_grads = policy.actor.backward(actor_cache, grad_logits)

    grad_value = (cfg.value_coef * 2.0 * value_err / batch_size)[:, None]
    critic_grads = policy.critic.backward(critic_cache, grad_value)

    clip_fraction = float(np.mean(np.abs(ratio - 1.0) > cfg.clip_epsilon))
    metrics = np.array([policy_loss, value_loss, mean_entropy, clip_fraction])
    return metrics, actor_grads, critic_grads
