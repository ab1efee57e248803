"""
Brute-force reference for one controller pass, written line by line from the
pseudocode and sharing no code with the package.

Inputs are plain lists indexed by container position.
"""


def reference_step(objectives, perfs, usages, limits, alpha, beta, capacity):
    n = len(objectives)
    G, S, B = [], [], []
    QG = QB = RG = RB = 0.0
    q = [0.0] * n
    for i in range(n):
        q[i] = objectives[i] - perfs[i]
        if q[i] > alpha * objectives[i]:
            G.append(i)
            QG = q[i] + QG
            RG = usages[i] + RG
        elif q[i] < -alpha * objectives[i]:
            B.append(i)
            QB = q[i] + QB
            RB = usages[i] + RB
        else:
            S.append(i)

    new = list(limits)
    lower = capacity * (1.0 / (2 * n))
    for i in range(n):
        if i in G:
            new[i] = limits[i] * (1 - q[i] / QG * (RG / capacity) * beta)
            if new[i] < lower:
                new[i] = lower
        elif i in B:
            new[i] = limits[i] * (1 + q[i] / QB * (RG / capacity) * beta)
            if new[i] > capacity:
                new[i] = capacity
    return {"G": G, "S": S, "B": B, "QG": QG, "QB": QB, "RG": RG, "RB": RB, "limits": new}
