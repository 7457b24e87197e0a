"""Independent brute-force models the tests derive expected values from.

Everything here is deliberately dumb: straight loops and literal
transcriptions, no IR, no channels, no shared code with the package paths
they are used to check.
"""


def unfold_arguments(delta, x0):
    """Descend x0 by delta until non-positive; return (base_arg, ascending h args)."""
    args = []
    current = x0
    while current > 0:
        args.append(current)
        current += delta
    return current, list(reversed(args))


def recursion_by_definition(delta, base_fn, step_fn, x):
    """Literal recursive definition (python callables, call-stack recursion)."""
    if x <= 0:
        return base_fn(x)
    return step_fn(x, recursion_by_definition(delta, base_fn, step_fn, x + delta))


def fold_plan(base_fn, step_fn, base_arg, h_args):
    out = base_fn(base_arg)
    for value in h_args:
        out = step_fn(value, out)
    return out


def phase_a_by_loop(x0, delta):
    """Literal counting loop; returns (g, e, s, final x)."""
    g = e = s = 0
    x = x0
    for _ in range(x0 + 1):
        if x > 0:
            g += 1
        elif x == 0:
            e += 1
        else:
            s += 1
        x += delta
    return g, e, s, x


def producer_by_loop(delta, x0):
    """Straight-line model of the full producer run.

    Mirrors the compiled program's observable behavior: returns the emitted
    values in order, the final register values, and what the inject cell
    holds afterwards (the swap pair trades x0 in against 0 and the leftover
    x back out).
    """
    s = e = g = w = 0
    pdx, pndx = 0, 1
    x, cell = x0, 0
    emitted = []
    w = w + x
    for _ in range(w + 1):
        if x > 0:
            g += 1
        elif x == 0:
            e += 1
        else:
            s += 1
        x += delta
    for _ in range(e):
        pdx = pdx + pndx
        pndx = pdx - pndx
    for _ in range(pdx):
        emitted.append(g)
        for _ in range(w + 1):
            x -= delta
            if x > 0:
                g -= 1
                emitted.append(x)
            elif x == 0:
                e -= 1
                emitted.append(x)
            else:
                s -= 1
    for _ in range(pndx):
        emitted.append(g)
        w += 1
        for _ in range(w + 1):
            x -= delta
            if x > 0:
                g -= 1
                x += delta
                emitted.append(x)
                x -= delta
            elif x == 0:
                e -= 1
            else:
                s -= 1
        w -= 1
    w = w - x
    x, cell = cell, x
    registers = {
        "s": s, "e": e, "g": g, "w": w, "x": x,
        "predDivX": pdx, "predNotDivX": pndx,
    }
    return emitted, registers, cell
