"""Command-line interface.

Exit codes: 0 success, 1 failed verification or violated precondition,
2 usage error.  Every random subcommand takes ``--seed``; without it a seed is
drawn from the OS and printed first so the run can be replayed.
"""

from __future__ import annotations

import argparse
import secrets
import sys
import time
from itertools import combinations, product
from pathlib import Path

import numpy as np

from . import attacks, security
from .boolfunc import sample_boolean_function
from .errors import BitQPKEError
from .gf2 import gf2_dot
from .qsim import trace_distance
from .registry import KeyRegistry
from .scheme import Ciphertext, PrivateKey, decrypt, encrypt, issue_public_key, keygen

PRIVATE_KEY_FILE = "private.key"


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed={args.seed}")
    return args.seed


def _bits(text: str) -> list[int]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"expected a bit string, got {text!r}")
    return [int(c) for c in text]


def cmd_keygen(args) -> int:
    rng = np.random.default_rng(_seed(args))
    sk = keygen(args.n, args.m or args.n, args.p or args.n, rng)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sk.save(out / PRIVATE_KEY_FILE)
    print(f"wrote {out / PRIVATE_KEY_FILE} (n={sk.n} m={sk.m} p={sk.p})")
    return 0


def cmd_issue(args) -> int:
    rng = np.random.default_rng(_seed(args))
    sk = PrivateKey.load(Path(args.key) / PRIVATE_KEY_FILE)
    registry = KeyRegistry(args.registry)
    for _ in range(args.count):
        pk = issue_public_key(sk, rng, registry)
        print(pk.key_id)
    return 0


def cmd_encrypt(args) -> int:
    registry = KeyRegistry(args.registry)
    pk = registry.get(args.key_id)
    ct = encrypt(pk, args.bit, registry)
    Path(args.out).write_text(ct.dumps())
    print(f"wrote {args.out}")
    return 0


def cmd_decrypt(args) -> int:
    sk = PrivateKey.load(Path(args.key) / PRIVATE_KEY_FILE)
    ct = Ciphertext.loads(Path(args.ct).read_text())
    print(decrypt(sk, ct))
    return 0


def cmd_verify(args) -> int:
    if args.claim == "perfect-encryption":
        rng = np.random.default_rng(_seed(args))
        claims = security.verify_perfect_encryption(args.n, args.samples, rng, args.tol)
    elif args.claim == "mixture":
        claims = security.verify_mixture(args.n, args.tol)
    elif args.claim == "prop1":
        claims = security.verify_prop1(args.n, args.tol)
    else:
        claims = security.verify_prop2(args.n, args.tol)
    for c in claims:
        if c.claim_id.startswith(("prop1", "prop2")):
            print(f"D={c.value:.12f}")
    print(security.format_report(claims))
    return 0 if all(c.passed for c in claims) else 1


def _print_transcript(tr: attacks.AttackTranscript, label: str = "") -> None:
    for idx, (y, rank) in enumerate(zip(tr.samples, tr.ranks), start=1):
        print(f"{label}sample {idx} y={y} y.k={gf2_dot(y, tr.true_k)} rank={rank}")


def cmd_attack_py12(args) -> int:
    rng = np.random.default_rng(_seed(args))
    tr = attacks.py12_attack_trial(args.n, rng, args.max_samples)
    _print_transcript(tr)
    print("summary:")
    print(f"  rank progression: {' '.join(map(str, tr.ranks))}")
    print(f"  true k:      {tr.true_k}")
    print(f"  recovered k: {tr.recovered if tr.recovered is not None else 'insufficient'}")
    print(f"  samples used: {len(tr.samples)}")
    print(f"  all samples orthogonal to k: {tr.orthogonal}")
    print(f"  success: {tr.success}")
    return 0 if tr.success else 1


def cmd_attack_newscheme(args) -> int:
    rng = np.random.default_rng(_seed(args))
    summary = attacks.attack_success_rate("newscheme", args.n, args.trials, rng, args.max_samples)
    for idx, tr in enumerate(summary.transcripts, start=1):
        got = tr.recovered if tr.recovered is not None else "insufficient"
        print(f"trial {idx} samples={len(tr.samples)} final_rank={tr.ranks[-1]} "
              f"recovered={got} success={tr.success}")
    print("summary:")
    print(f"  trials: {summary.trials}")
    print(f"  successes: {summary.successes}")
    print(f"  success rate: {summary.rate:.4f}")
    return 0


def cmd_attack_recover_f(args) -> int:
    rng = np.random.default_rng(_seed(args))
    n = args.n or args.m
    F = sample_boolean_function(args.m, n, args.p, rng)
    pairs = attacks.truth_table_pairs(F)
    rec = attacks.recover_boolean_function(pairs, args.m, n)
    mismatches = 0
    for s, k in pairs:
        got = rec(s)
        mismatches += got != k
        print(f"s={s} F(s)={k} recovered={got}")
    print("summary:")
    for j, masks in enumerate(rec.anf, start=1):
        terms = " ".join(format(mv, f"0{args.m}b") for mv in masks) or "(zero)"
        print(f"  output {j} ANF: {terms}")
    print(f"  inputs checked: {len(pairs)}")
    print(f"  mismatches: {mismatches}")
    print(f"  underdetermined: {rec.underdetermined}")
    return 0 if mismatches == 0 else 1


def cmd_attack_guess(args) -> int:
    rng = np.random.default_rng(_seed(args))
    est = attacks.guessing_attack_estimate(args.n, args.l, args.trials, rng)
    print(f"n={est.n} l={est.l} trials={est.trials}")
    print(f"successes: {est.successes}")
    print(f"success rate: {est.rate:.4f} +/- {est.half_width:.4f}")
    print(f"closed form 2^-l + (1 - 2^-l)/2: {est.closed_form:.4f}")
    if est.l == 1:
        print(f"alternative value: {est.alt_value:.4f}")
    print(f"reproduces: {est.reproduces()}")
    return 0


def cmd_multicopy(args) -> int:
    pattern = args.pattern
    if len(pattern) != args.t:
        print(f"pattern has {len(pattern)} bits, expected t={args.t}", file=sys.stderr)
        return 2
    mixtures = {}
    for pat in product((0, 1), repeat=args.t):
        mixtures[pat] = attacks.multi_copy_mixture(args.n, args.t, pat)
    rho = mixtures[tuple(pattern)]
    print(f"pattern={''.join(map(str, pattern))} dim={rho.data.shape[0]} "
          f"trace={rho.trace().real:.12f} hermitian_err={rho.hermiticity_error():.3e} "
          f"min_eig={rho.min_eigenvalue():.3e}")
    for a, b in combinations(sorted(mixtures), 2):
        d = trace_distance(mixtures[a], mixtures[b])
        print(f"D({''.join(map(str, a))}, {''.join(map(str, b))}) = {d:.12f}")
    return 0


def cmd_bench(args) -> int:
    n = args.n
    terms = len(security.ensemble_keys(n))
    times = []
    for _ in range(args.repeat):
        start = time.perf_counter()
        security.ensemble_mixture(n, 0)
        times.append(time.perf_counter() - start)
    best = min(times)
    print(f"n={n} terms={terms} best={best:.4f}s throughput={terms / best:.0f} terms/s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bitqpke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="sample a private key")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("issue", help="issue public keys into a registry")
    p.add_argument("--key", required=True)
    p.add_argument("--registry", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_issue)

    p = sub.add_parser("encrypt", help="encrypt one bit with a registered public key")
    p.add_argument("--registry", required=True)
    p.add_argument("--key-id", required=True)
    p.add_argument("--bit", type=int, choices=(0, 1), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    p.add_argument("--key", required=True)
    p.add_argument("--ct", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("verify", help="check a security identity numerically")
    p.add_argument("claim", choices=("perfect-encryption", "mixture", "prop1", "prop2"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("attack", help="run an attack")
    asub = p.add_subparsers(dest="target", required=True)
    a = asub.add_parser("py12")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--seed", type=int)
    a.add_argument("--max-samples", type=int, default=50)
    a.set_defaults(func=cmd_attack_py12)
    a = asub.add_parser("newscheme")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--trials", type=int, required=True)
    a.add_argument("--seed", type=int)
    a.add_argument("--max-samples", type=int, default=50)
    a.set_defaults(func=cmd_attack_newscheme)
    a = asub.add_parser("recover-f")
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--n", type=int)
    a.add_argument("--seed", type=int)
    a.set_defaults(func=cmd_attack_recover_f)
    a = asub.add_parser("guess")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--trials", type=int, required=True)
    a.add_argument("--seed", type=int)
    a.set_defaults(func=cmd_attack_guess)

    p = sub.add_parser("multicopy", help="key-shared multi-copy mixtures and distances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--pattern", type=_bits, required=True)
    p.set_defaults(func=cmd_multicopy)

    p = sub.add_parser("bench", help="time full-ensemble enumeration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BitQPKEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
