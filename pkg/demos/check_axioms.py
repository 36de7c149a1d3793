"""Randomised axiom checks on every bundled target."""

from trapkit.free_eval import GraphTrap, check_trap_axioms, complete_quasi_trap
from trapkit.kernel_trap import KernelTrap
from trapkit.sampling import random_graph_of_arity
from trapkit.tensor_trap import TensorTrap
from trapkit.wired import FiniteSupportTrap

T, K = TensorTrap(2), KernelTrap(16)
F = FiniteSupportTrap()
C = complete_quasi_trap(F)


def finite_support(rng, k, l):
    n = int(rng.integers(0, min(k, l) + 1))
    wires = zip(rng.permutation(k)[:n] + 1, rng.permutation(l)[:n] + 1)
    free = k + l - 2 * n
    body = {tuple(int(v) for v in rng.integers(0, 2, size=free)): 1}
    return C.embed(F.make(k, l, [(int(a), int(b)) for a, b in wires], body))


runs = [
    ("graphs", GraphTrap(), lambda r, k, l: random_graph_of_arity(r, k, l), {}),
    ("tensors d=2", T, T.random, {}),
    ("kernels N=16", K, K.random, {"max_arity": 2, "max_slots": 4}),
    ("finite support, completed", C, finite_support, {}),
]
for name, target, sampler, kw in runs:
    report = check_trap_axioms(target, sampler, trials=20, rng=1, **kw)
    print(f"== {name}: {'all axioms hold' if report.ok else 'FAILURES'}")
    print(report)
