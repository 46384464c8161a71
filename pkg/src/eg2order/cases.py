"""Parameter sets of the three worked examples (ids "3.3", "3.4", "3.11").

In the two chain examples the starred matrix is the majorizing one: the
unstarred matrix equals ``starred @ T``.  phi is not fixed by the examples;
any common value works, 2.0 is used by default.
"""

from eg2order.majorization import ParamMatrix, TTransform

DEFAULT_PHI = 2.0

EX3_3 = {
    "kind": "series",
    "set": "S",
    "X": ParamMatrix((0.54, 0.66), (1.7, 1.4)),
    "X*": ParamMatrix((0.5, 0.7), (1.8, 1.3)),
    "transform": TTransform(2, 1, 2, 0.8),
    # direction claimed for this example, checked against the grid by `reproduce`
    "stated": "X_{1:2} <=_st X*_{1:2}",
}

EX3_4 = {
    "kind": "parallel",
    "set": "T",
    "X": ParamMatrix((2.34, 2.26), (1.32, 1.38)),
    "X*": ParamMatrix((2.1, 2.5), (1.5, 1.2)),
    # entries [[0.4, 0.6], [0.6, 0.4]], i.e. w = 0.4
    "transform": TTransform(2, 1, 2, 0.4),
    "stated": "X_{2:2} >=_st X*_{2:2}",
}

EX3_11 = {
    "kind": "parallel",
    "theta": 5.0,
    "alpha": 2.0,
    "phi": (0.1, 1.14, 0.3),
    "phi*": (0.6, 0.9, 0.04),
}
