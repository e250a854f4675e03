"""Monomial orders: lex, degrevlex, and block (elimination) orders.

An order produces a sortable key from an exponent tuple; larger key means
larger monomial.  Block orders compare the designated blocks first, which
gives elimination orders when the eliminated variables form the top block.
"""

from __future__ import annotations


class Lex:
    name = "lex"

    def key(self, expts):
        return tuple(expts)

    def __eq__(self, other):
        return isinstance(other, Lex)

    def __hash__(self):
        return hash("lex")

    def __repr__(self):
        return "lex"


class DegRevLex:
    name = "degrevlex"

    def key(self, expts):
        return (sum(expts),) + tuple(-e for e in reversed(expts))

    def __eq__(self, other):
        return isinstance(other, DegRevLex)

    def __hash__(self):
        return hash("degrevlex")

    def __repr__(self):
        return "degrevlex"


class Block:
    """Ordered partition of the variable indices with a sub-order per block.

    The first block is compared first, so putting the variables to be
    eliminated into the first block yields an elimination order.
    """

    name = "block"

    def __init__(self, blocks):
        # blocks: list of (tuple of variable indices, sub-order)
        self.blocks = tuple((tuple(ix), sub) for ix, sub in blocks)

    def key(self, expts):
        out = ()
        for ix, sub in self.blocks:
            out += sub.key(tuple(expts[i] for i in ix))
        return out

    def __eq__(self, other):
        return isinstance(other, Block) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return "block(%s)" % ", ".join("%r:%r" % (ix, sub) for ix, sub in self.blocks)


def elimination_order(vt, eliminate):
    """Block order making the `eliminate` names strictly greater than the
    rest; degrevlex inside each block."""
    elim_ix = tuple(i for i, n in enumerate(vt.names) if n in eliminate)
    keep_ix = tuple(i for i, n in enumerate(vt.names) if n not in eliminate)
    missing = set(eliminate) - set(vt.names)
    if missing:
        raise ValueError("unknown variables: %s" % sorted(missing))
    return Block([(elim_ix, DegRevLex()), (keep_ix, DegRevLex())])


def product_order_t_last(vt, tname="t"):
    """Block order with everything except `t` in the leading degrevlex block.

    A Groebner basis for this order, read over the field with t inverted,
    stays a Groebner basis; this is how bases over Q(t) are computed
    without rational-function arithmetic.
    """
    main = tuple(i for i, n in enumerate(vt.names) if n != tname)
    tix = (vt.index[tname],)
    return Block([(main, DegRevLex()), (tix, Lex())])
