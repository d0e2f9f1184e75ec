"""Independent evaluation of the P^1 solution entries α, P1, P2 from their double sums."""
import math
from fractions import Fraction


def p1_reference(N):
    """Entries of the P^1 solution from its explicit double sums (Fractions, independent code)."""
    half = Fraction(1, 2)
    alpha = [dict() for _ in range(N)]
    P1 = [dict() for _ in range(N)]
    P2 = [dict() for _ in range(N)]
    for j in range(N):
        for i in range(j + 1):
            sa = sum((-1) ** l * (i - l + half) ** (2 * j + 1) * math.comb(2 * i + 1, l) for l in range(i + 1))
            sb = sum((-1) ** l * (i - l + half) ** (2 * j) * (math.comb(2 * i, l) - (math.comb(2 * i, l - 1) if l else 0))
                     for l in range(i + 1))
            if 2 * j + 2 < N:
                alpha[2 * j + 2][2 * i + 2] = 2 * sa / (math.factorial(i) * math.factorial(i + 1))
                P2[2 * j + 2][2 * i + 1] = -half * (2 * i + 1) * sb / math.factorial(i) ** 2
            if 2 * j + 1 < N:
                P1[2 * j + 1][2 * i + 1] = sb / math.factorial(i) ** 2
    return alpha, P1, P2
