"""Surgery on straight-line programs built over a dictionary string.

After building an SLP for the dictionary string D (blocks joined by unique
separators), the grammar is reshaped into per-block rules:

- occurrence_counts: how many times each rule's nonterminal appears in the
  full parse tree of D.
- prune_and_reroot: delete separators and every nonterminal appearing once,
  leaving the left-to-right list of roots of the surviving maximal subtrees.
- split_sublists: cut that root list at block boundaries (expansion lengths
  align exactly with block lengths).
- make_block_rules: balanced-binarize each sublist into one symbol per block;
  single-symbol sublists alias the symbol itself, adding no rule.
- combine: splice kept dictionary rules, block rules, and the grammar built
  over the block-ID sequence into one densely numbered SLP for the input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .repair import Grammar, expansion_lengths


@dataclass
class RootList:
    """Roots of the maximal subtrees that survive pruning, left to right.

    symbols holds ids in the dictionary grammar's space (terminals below
    num_terminals, nonterminal i as num_terminals + i); kept marks which
    rules survived; counts are the parse-tree occurrence counts."""

    symbols: np.ndarray
    kept: np.ndarray
    counts: np.ndarray


@dataclass
class BlockRuleSet:
    """One symbol per block plus the new binarization rules behind them.

    rules hold (left, right) bodies in the dictionary grammar's id space,
    numbered consecutively after its existing rules; block_symbols[i] is the
    symbol whose expansion is exactly block i."""

    rules: np.ndarray
    block_symbols: np.ndarray
    base_rules: int


def occurrence_counts(grammar: Grammar) -> np.ndarray:
    """Parse-tree occurrence count of every rule's nonterminal.

    Requires rule bodies to reference only lower rule ids (as pair
    replacement produces); counts propagate top-down in one reverse sweep.
    """
    nt = grammar.num_terminals
    r = grammar.r
    counts = np.zeros(r, dtype=np.int64)
    if r == 0:
        return counts
    tops = grammar.top[grammar.top >= nt] - nt
    np.add.at(counts, tops, 1)
    rules = grammar.rules
    if r and (rules.max(initial=0) >= nt + r or np.any(rules - nt >= np.arange(r)[:, None])):
        raise ValueError("rule bodies must reference lower rule ids")
    for i in range(r - 1, -1, -1):
        c = counts[i]
        if c == 0:
            continue
        for child in (int(rules[i, 0]), int(rules[i, 1])):
            if child >= nt:
                counts[child - nt] += c
    return counts


def prune_and_reroot(grammar: Grammar, separator_min: int) -> RootList:
    """Drop separators and once-occurring nonterminals from D's parse tree.

    Symbols in [separator_min, num_terminals) are separators and vanish;
    nonterminals with parse-tree count 1 are expanded in place.  What remains
    is the left-to-right sequence of surviving subtree roots.
    """
    nt = grammar.num_terminals
    counts = occurrence_counts(grammar)
    kept = counts >= 2
    rl = grammar.rules[:, 0]
    rr = grammar.rules[:, 1]
    out: list[int] = []
    for s in grammar.top.tolist():
        stack = [s]
        while stack:
            x = stack.pop()
            if x < separator_min:
                out.append(x)
            elif x < nt:
                continue  # separator
            elif kept[x - nt]:
                out.append(x)
            else:
                stack.append(int(rr[x - nt]))
                stack.append(int(rl[x - nt]))
    return RootList(
        symbols=np.asarray(out, dtype=np.int64), kept=kept, counts=counts
    )


def split_sublists(
    rootlist: RootList, block_lengths, grammar: Grammar
) -> list[np.ndarray]:
    """Cut the root list so sublist i expands to exactly block i."""
    nt = grammar.num_terminals
    if grammar.r:
        lens = expansion_lengths(grammar)
        idx = np.maximum(rootlist.symbols - nt, 0)
        sym_len = np.where(rootlist.symbols < nt, 1, lens[idx])
    else:
        sym_len = np.ones(len(rootlist.symbols), dtype=np.int64)
    targets = np.asarray(block_lengths, dtype=np.int64)
    out: list[np.ndarray] = []
    pos = 0
    syms = rootlist.symbols
    for t in targets.tolist():
        acc = 0
        start = pos
        while acc < t:
            if pos >= len(syms):
                raise AssertionError("root list shorter than the blocks")
            acc += int(sym_len[pos])
            pos += 1
        if acc != t:
            raise AssertionError("root list does not align with block boundaries")
        out.append(syms[start:pos])
    if pos != len(syms):
        raise AssertionError("root list longer than the blocks")
    return out


def make_block_rules(sublists: list[np.ndarray], grammar: Grammar) -> BlockRuleSet:
    """Balanced-binarize each sublist into a single per-block symbol.

    Sublists of length one alias their symbol (no unary rules); repeated
    (left, right) bodies among the new rules are shared.
    """
    nt = grammar.num_terminals
    base = grammar.r
    new_rules: list[tuple[int, int]] = []
    memo: dict[tuple[int, int], int] = {}
    block_symbols: list[int] = []

    def build(syms: list[int], lo: int, hi: int) -> int:
        if hi - lo == 1:
            return syms[lo]
        mid = (lo + hi + 1) // 2
        left = build(syms, lo, mid)
        right = build(syms, mid, hi)
        key = (left, right)
        got = memo.get(key)
        if got is not None:
            return got
        sym = nt + base + len(new_rules)
        new_rules.append(key)
        memo[key] = sym
        return sym

    for sub in sublists:
        lst = [int(x) for x in sub]
        if not lst:
            raise AssertionError("empty sublist")
        block_symbols.append(build(lst, 0, len(lst)))

    rules = (
        np.asarray(new_rules, dtype=np.int64).reshape(-1, 2)
        if new_rules
        else np.empty((0, 2), dtype=np.int64)
    )
    return BlockRuleSet(
        rules=rules,
        block_symbols=np.asarray(block_symbols, dtype=np.int64),
        base_rules=base,
    )


def combine(
    dict_grammar: Grammar,
    rootlist: RootList,
    block_rules: BlockRuleSet,
    p_grammar: Grammar,
    num_terminals: int,
) -> Grammar:
    """Merge kept dictionary rules, block rules, and the ID-sequence grammar.

    p_grammar's terminals are block ids; each is replaced by the block's
    symbol.  Rules are renumbered densely in the order kept-dictionary,
    block, then ID-sequence, which is topological because each layer only
    references the ones before it.
    """
    nt = num_terminals
    nt_d = dict_grammar.num_terminals  # includes separators
    kept_ids = np.nonzero(rootlist.kept)[0]
    n_keep = len(kept_ids)
    n_new = len(block_rules.rules)
    n_p = p_grammar.r

    # base-space symbol -> final symbol
    size = nt_d + dict_grammar.r + n_new
    sym_map = np.full(size, -1, dtype=np.int64)
    sym_map[:nt] = np.arange(nt)
    sym_map[nt_d + kept_ids] = nt + np.arange(n_keep)
    sym_map[nt_d + dict_grammar.r :] = nt + n_keep + np.arange(n_new)

    parts = []
    if n_keep:
        parts.append(sym_map[dict_grammar.rules[kept_ids]])
    if n_new:
        parts.append(sym_map[block_rules.rules])

    blocks_final = sym_map[block_rules.block_symbols]

    def map_p(sym: np.ndarray) -> np.ndarray:
        b = p_grammar.num_terminals
        out = np.where(sym < b, blocks_final[np.minimum(sym, b - 1)], 0)
        out = np.where(sym >= b, nt + n_keep + n_new + (sym - b), out)
        return out

    if n_p:
        parts.append(map_p(p_grammar.rules))
    rules = (
        np.concatenate(parts, axis=0) if parts else np.empty((0, 2), dtype=np.int64)
    )
    top = map_p(p_grammar.top)
    if len(rules) and rules.min() < 0:
        raise AssertionError("combined grammar references a pruned symbol")
    return Grammar(num_terminals=nt, rules=rules, top=top)
