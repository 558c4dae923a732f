"""
Nonvanishing-minors decisions for compressed Fourier matrices
Exhaustive exact enumeration, published closed-form criteria and uncertainty-principle witnesses
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

import sympy

from .characters import SubgroupChar, subgroup_character, subgroup_of_index
from .config import Settings, get_settings, set_settings
from .cyclotomic import CycMatrix, CycNum, det_exact, kernel_vector, root_of_unity
from .errors import (
    CftNvmError,
    CharacterError,
    CriterionNotApplicableError,
    FieldError,
    InconsistencyError,
    ShapeError,
    SizeCapError,
    SymmetryError,
    WitnessError,
)
from .finite_field import field_for_order
from .transform import (
    CftMatrix,
    GaussSumSet,
    GroupAlgebraElement,
    TSums,
    cft_matrix,
    extend_from_representatives,
    fourier_transform,
    gauss_set,
    is_chi_symmetric,
    t_sums,
)

logger = logging.getLogger(__name__)

METHODS = ("brute", "theorem", "both")
CHARACTER_SELECTORS = ("all", "trivial", "nontrivial")
STRATEGIES = ("laplace", "direct")


@dataclass(frozen=True, eq=False)
class MinorWitness:
    """Square submatrix on sorted rows I and columns J with its determinant"""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    determinant: CycNum

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise ShapeError("Witness rows and columns differ in size")
        if list(self.rows) != sorted(self.rows) or list(self.cols) != sorted(self.cols):
            raise ShapeError("Witness indices must be sorted")

    def to_dict(self) -> Dict[str, List[int]]:
        return {"I": list(self.rows), "J": list(self.cols)}


@dataclass(frozen=True, eq=False)
class NvmReport:
    """Outcome of one NVM decision; holds is None only when error is set"""
    holds: Optional[bool]
    method: str
    witness: Optional[MinorWitness] = None
    minors_checked: int = 0
    q: Optional[int] = None
    index: Optional[int] = None
    chi_j: Optional[int] = None
    theorem_prediction: Optional[bool] = None
    agreement: Optional[bool] = None
    error: Optional[str] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"Unknown method {self.method!r}")
        if self.error is not None:
            if self.holds is not None or self.witness is not None:
                raise InconsistencyError("A report with an error carries no decision")
            return
        if self.holds is None:
            raise InconsistencyError("A report without an error must carry a decision")
        if not self.holds and self.method != "theorem" and self.witness is None:
            raise InconsistencyError("A failing brute-force report must carry a witness")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "index": self.index,
            "chi_j": self.chi_j,
            "method": self.method,
            "holds": self.holds,
            "theorem_prediction": self.theorem_prediction,
            "agreement": self.agreement,
            "witness": self.witness.to_dict() if self.witness else None,
            "minors_checked": self.minors_checked,
            "error": self.error,
        }


def _laplace_minors(matrix: CycMatrix) -> Tuple[Optional[MinorWitness], int]:
    """Build k-minors from (k-1)-minors by expanding along the last row of I"""
    n = matrix.rows
    rows = matrix.to_rows()
    order = matrix.order
    checked = 1  # the empty minor
    previous: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], CycNum] = {((), ()): CycNum.one(order)}
    for k in range(1, n + 1):
        current: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], CycNum] = {}
        col_sets = list(combinations(range(n), k))
        for I in combinations(range(n), k):
            head, row = I[:-1], rows[I[-1]]
            for J in col_sets:
                total = CycNum.zero(order)
                for t, col in enumerate(J):
                    entry = row[col]
                    if entry.is_zero():
                        continue
                    term = entry * previous[(head, J[:t] + J[t + 1:])]
                    total = total - term if (k - 1 + t) % 2 else total + term
                checked += 1
                if total.is_zero():
                    return MinorWitness(I, J, total), checked
                current[(I, J)] = total
        previous = current
        logger.debug(f"All {len(current)} minors of size {k} are nonzero")
    return None, checked


def _direct_minors(matrix: CycMatrix) -> Tuple[Optional[MinorWitness], int]:
    n = matrix.rows
    checked = 1
    for k in range(1, n + 1):
        for I in combinations(range(n), k):
            for J in combinations(range(n), k):
                det = det_exact(matrix.submatrix(I, J))
                checked += 1
                if det.is_zero():
                    return MinorWitness(I, J, det), checked
    return None, checked


def nvm_brute(matrix: CycMatrix, strategy: str = "laplace", cap: Optional[int] = None) -> NvmReport:
    """Check every square minor, smallest first, stopping at the first zero"""
    if not matrix.is_square:
        raise ShapeError(f"NVM needs a square matrix, got {matrix.rows}x{matrix.cols}")
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown minor strategy {strategy!r}")
    cap = get_settings().minor_cap if cap is None else cap
    if matrix.rows > cap:
        raise SizeCapError(f"Matrix size {matrix.rows} exceeds the minor enumeration cap {cap}")
    if strategy == "laplace":
        witness, checked = _laplace_minors(matrix)
    else:
        witness, checked = _direct_minors(matrix)
    return NvmReport(holds=witness is None, method="brute", witness=witness, minors_checked=checked)


def nvm_theorem_index3_nontrivial(g: GaussSumSet, ts: Optional[TSums] = None) -> bool:
    """The three Gauss sums are not all equal and T_0 is nonzero"""
    if len(g) != 3:
        raise CharacterError(f"The index-3 criterion needs 3 Gauss sums, got {len(g)}")
    if g.chi.is_trivial():
        raise CharacterError("The index-3 criterion covers nontrivial characters only")
    if ts is None:
        ts = t_sums(g)
    return not g.all_equal() and not ts[0].is_zero()


def known_criterion(chi: SubgroupChar, gauss: Optional[GaussSumSet] = None,
                    ts: Optional[TSums] = None) -> Optional[bool]:
    """Prediction from a published criterion, or None when none applies"""
    H = chi.subgroup
    spec = H.parent
    if H.is_trivial():
        return spec.m == 1
    if chi.is_trivial():
        if H.index == 1:
            return True
        if H.index == 2 and spec.p != 2:
            return True
        if H.index == 3:
            return spec.p % 3 == 1
        return None
    if H.index == 3:
        return nvm_theorem_index3_nontrivial(gauss or gauss_set(chi), ts)
    return None


def chebotarev_matrix(p: int) -> CycMatrix:
    return CycMatrix.from_rows([[root_of_unity(p, i * j) for j in range(p)] for i in range(p)])


def chebotarev_check(p: int) -> NvmReport:
    """Every minor of the p x p DFT matrix is nonzero"""
    if not sympy.isprime(p):
        raise FieldError(f"{p} is not prime")
    cap = get_settings().chebotarev_cap
    if p > cap:
        raise SizeCapError(f"Prime {p} exceeds the Chebotarev cap {cap}")
    report = nvm_brute(chebotarev_matrix(p), cap=cap)
    return replace(report, q=p)


def nvm_decide(chi: SubgroupChar, method: str = "both", strategy: str = "laplace") -> NvmReport:
    """Decide NVM for the canonical CFT matrix of chi"""
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}")
    H = chi.subgroup
    descriptors = {"q": H.parent.q, "index": H.index, "chi_j": chi.j}

    gauss = gauss_set(chi) if H.index == 3 and not chi.is_trivial() else None
    ts = t_sums(gauss) if gauss is not None else None
    prediction = known_criterion(chi, gauss, ts)
    if ts is not None and not gauss.all_equal() and ts[0].is_zero():
        logger.info(f"T_0 = 0 with distinct Gauss sums at q={H.parent.q}, j={chi.j}")

    if method == "theorem":
        if prediction is None:
            raise CriterionNotApplicableError(
                f"No closed-form criterion for q={H.parent.q}, index {H.index}, j={chi.j}")
        return NvmReport(holds=prediction, method="theorem", theorem_prediction=prediction,
                         **descriptors)

    brute = nvm_brute(cft_matrix(chi).matrix, strategy)
    if method == "brute" or prediction is None:
        return replace(brute, theorem_prediction=prediction, **descriptors)

    agreement = brute.holds == prediction
    if not agreement:
        logger.warning(f"Brute force and criterion disagree at q={H.parent.q}, "
                       f"index {H.index}, j={chi.j}: brute={brute.holds}, criterion={prediction}")
    return replace(brute, method="both", theorem_prediction=prediction, agreement=agreement,
                   **descriptors)


def _bound(f: GroupAlgebraElement, f_hat: GroupAlgebraElement, chi: SubgroupChar) -> int:
    q, h = f.field.q, chi.subgroup.order
    if not chi.is_trivial():
        return q + h - 1
    f_zero = f.values[0].is_zero()
    hat_zero = f_hat.values[0].is_zero()
    if f_zero and hat_zero:
        return q + 2 * h - 1
    if f_zero or hat_zero:
        return q + h
    return q + 1


def uncertainty_bound(f: GroupAlgebraElement, chi: SubgroupChar) -> Tuple[int, int]:
    """(|supp f| + |supp f_hat|, required lower bound) for a nonzero chi-symmetric f"""
    if f.is_zero():
        raise SymmetryError("The uncertainty bound needs a nonzero element")
    if not is_chi_symmetric(f, chi):
        raise SymmetryError("The uncertainty bound needs a chi-symmetric element")
    f_hat = fourier_transform(f)
    return len(f.support()) + len(f_hat.support()), _bound(f, f_hat, chi)


def uncertainty_bound_holds(f: GroupAlgebraElement, chi: SubgroupChar) -> bool:
    total, bound = uncertainty_bound(f, chi)
    return total >= bound


def donoho_stark_holds(f: GroupAlgebraElement) -> bool:
    """|supp f| * |supp f_hat| >= q for nonzero f"""
    if f.is_zero():
        raise SymmetryError("The Donoho-Stark bound needs a nonzero element")
    return len(f.support()) * len(fourier_transform(f).support()) >= f.field.q


def violation_witness(cft: CftMatrix, witness: MinorWitness,
                      chi: SubgroupChar) -> GroupAlgebraElement:
    """chi-symmetric f whose transform vanishes on the witness rows, breaking the bound"""
    sub = cft.matrix.submatrix(witness.rows, witness.cols)
    kernel = kernel_vector(sub)
    if kernel is None:
        raise WitnessError(f"Submatrix on rows {list(witness.rows)}, "
                           f"columns {list(witness.cols)} is nonsingular")

    H = chi.subgroup
    values: Dict[Any, CycNum] = {r: CycNum.zero() for r in cft.R}
    for col, c in zip(witness.cols, kernel):
        r = cft.R[col]
        # the zero representative's column is |H| times the coefficient at 0
        values[r] = c.scale(H.order) if r.is_zero() else c
    f = extend_from_representatives(values, chi)

    if f.is_zero():
        raise InconsistencyError("Witness element is zero")
    if not is_chi_symmetric(f, chi):
        raise InconsistencyError("Witness element is not chi-symmetric")
    f_hat = fourier_transform(f)
    for i in witness.rows:
        if not f_hat[cft.S[i]].is_zero():
            raise InconsistencyError(f"Witness transform does not vanish at {cft.S[i]}")
    if uncertainty_bound_holds(f, chi):
        raise InconsistencyError("Witness element satisfies the uncertainty bound")
    return f


def prime_powers(q_max: int) -> List[int]:
    return [q for q in range(2, q_max + 1) if len(sympy.factorint(q)) == 1]


def select_characters(order: int, selector: str) -> List[int]:
    if selector == "all":
        return list(range(order))
    if selector == "trivial":
        return [0]
    if selector == "nontrivial":
        return list(range(1, order))
    raise CharacterError(f"Unknown character selector {selector!r}")


def _scan_instance(task: Tuple[int, int, int, Settings]) -> NvmReport:
    q, index, j, settings = task
    set_settings(settings)
    try:
        H = subgroup_of_index(field_for_order(q), index)
        return nvm_decide(subgroup_character(H, j), method="both")
    except InconsistencyError:
        raise
    except CftNvmError as exc:
        logger.warning(f"No decision for q={q}, index {index}, j={j}: {exc}")
        return NvmReport(holds=None, method="both", q=q, index=index, chi_j=j,
                         error=f"{type(exc).__name__}: {exc}")


def scan_range(q_max: int, index: int, chars: str = "all",
               workers: Optional[int] = None) -> List[NvmReport]:
    """One report per (q, chi), q ascending then chi exponent ascending"""
    settings = get_settings()
    if q_max > settings.scan_q_max:
        raise SizeCapError(f"q_max {q_max} exceeds the scan cap {settings.scan_q_max}")
    if index < 1:
        raise CharacterError(f"Index must be positive, got {index}")
    if chars not in CHARACTER_SELECTORS:
        raise CharacterError(f"Unknown character selector {chars!r}")

    tasks = [(q, index, j, settings)
             for q in prime_powers(q_max) if (q - 1) % index == 0
             for j in select_characters((q - 1) // index, chars)]
    workers = settings.workers if workers is None else workers
    logger.info(f"Scanning {len(tasks)} instances up to q={q_max}, index {index}, "
                f"characters {chars}, workers {workers}")

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_instance, tasks))
    return [_scan_instance(task) for task in tasks]


def t_circulant(ts: TSums) -> CycMatrix:
    """M[i][j] = T_((i + j) mod 3)"""
    return CycMatrix.from_rows([[ts[i + j] for j in range(3)] for i in range(3)])


@dataclass(frozen=True, eq=False)
class ProofIdentityCheck:
    """Exact checks of the 2x2-minor and determinant identities for one character"""
    minor_identities: Tuple[bool, bool, bool]
    zero_minor_equivalence: Tuple[bool, bool, bool]
    determinant: CycNum
    determinant_identity: bool
    determinant_nonzero: bool

    @property
    def all_hold(self) -> bool:
        return (all(self.minor_identities) and all(self.zero_minor_equivalence)
                and self.determinant_identity and self.determinant_nonzero)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "minor_identities": list(self.minor_identities),
            "zero_minor_equivalence": list(self.zero_minor_equivalence),
            "determinant": self.determinant.to_dict(),
            "determinant_identity": self.determinant_identity,
            "determinant_nonzero": self.determinant_nonzero,
        }


def proof_identities(g: GaussSumSet) -> ProofIdentityCheck:
    """q (T_(i+1) T_(i+2) - T_i^2) = -3 G_0 G_1 G_2 conj(T_i) and det M = -27 G_0 G_1 G_2"""
    if g.chi.is_trivial():
        raise CharacterError("Proof identities need a nontrivial character")
    ts = t_sums(g)
    q = g.chi.field.q
    product = g[0] * g[1] * g[2]
    minors, equivalences = [], []
    for i in range(3):
        minor = ts[i + 1] * ts[i + 2] - ts[i] * ts[i]
        minors.append(minor.scale(q) == (product * ts[i].conjugate()).scale(-3))
        equivalences.append(minor.is_zero() == ts[i].is_zero())
    determinant = det_exact(t_circulant(ts))
    return ProofIdentityCheck(
        minor_identities=tuple(minors),  # type: ignore[arg-type]
        zero_minor_equivalence=tuple(equivalences),  # type: ignore[arg-type]
        determinant=determinant,
        determinant_identity=determinant == product.scale(-27),
        determinant_nonzero=not determinant.is_zero(),
    )
