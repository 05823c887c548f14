import csv
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from thuekit.core.config import settings
from thuekit.core.exceptions import PreconditionError, ThueKitError
from thuekit.core.logging import logger
from thuekit.models.derivation import Derivation, DerivationBuilder, Redex
from thuekit.models.system import RewritingSystem
from thuekit.models.word import Word, enumerate_words
from thuekit.schemas.dehn import CappedDistanceResult, DehnProfilePoint, DistanceMode, DistanceStatus
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import complete_companion

# word -> (previous word, redex turning previous into word)
Parents = Dict[Word, Optional[Tuple[Word, Redex]]]


def _reverse_param_cap(system: RewritingSystem, length_cap: int) -> int:
    """Largest schema parameter whose left-hand side still fits in length_cap."""
    best = 0
    for schema in system.schemas:
        n = schema.n_min
        while n < settings.PARAM_CAP and schema.lhs_at(n + 1).length <= length_cap:
            n += 1
        best = max(best, n)
    return best


def _steps(system: RewritingSystem, w: Word, length_cap: int, mode: DistanceMode, param_cap: int):
    """(neighbour, redex) pairs of w inside the cap, one per distinct neighbour."""
    redexes = RewritingService.find_redexes(
        system, w, include_reverse=mode == DistanceMode.THUE, param_cap=param_cap
    )
    seen = {w}
    out = []
    for redex in redexes:
        if redex.target.length - redex.source.length + w.length > length_cap:
            continue
        image = redex.apply(w)
        if image not in seen:
            seen.add(image)
            out.append((image, redex))
    return out


def _path_to(parents: Parents, word: Word) -> List[Redex]:
    """Redexes leading from the BFS root to ``word``."""
    path = []
    while parents[word] is not None:
        previous, redex = parents[word]
        path.append(redex)
        word = previous
    path.reverse()
    return path


def _expand(system, frontier, parents, length_cap, mode, param_cap):
    next_frontier = []
    for word in frontier:
        for image, redex in _steps(system, word, length_cap, mode, param_cap):
            if image not in parents:
                parents[image] = (word, redex)
                next_frontier.append(image)
    return next_frontier


class DehnService:

    @staticmethod
    def thue_neighbors(system: RewritingSystem, w: Word, length_cap: Optional[int] = None) -> List[Word]:
        """Words one forward or reverse rule application away from w, within the length cap"""
        length_cap = settings.default_length_cap(w.length) if length_cap is None else length_cap
        if w.length > length_cap:
            raise PreconditionError(f"|{w}| = {w.length} exceeds length cap {length_cap}")
        param_cap = _reverse_param_cap(system, length_cap)
        images = [image for image, _ in _steps(system, w, length_cap, DistanceMode.THUE, param_cap)]
        return sorted(images)

    @staticmethod
    def capped_distance(
        system: RewritingSystem,
        u: Word,
        v: Word,
        length_cap: Optional[int] = None,
        dist_cap: Optional[int] = None,
        mode: Union[DistanceMode, str] = DistanceMode.THUE,
        with_derivation: bool = False,
    ) -> CappedDistanceResult:
        """
        Least number of rule applications turning u into v, searching only words
        of length <= length_cap and paths of length <= dist_cap
        """
        mode = DistanceMode(mode)
        length_cap = settings.default_length_cap(u.length, v.length) if length_cap is None else length_cap
        dist_cap = settings.DIST_CAP if dist_cap is None else dist_cap
        logger.debug(f"capped_distance({u}, {v}) under {system.name}, caps=({length_cap}, {dist_cap}), {mode.value}")

        if max(u.length, v.length) > length_cap:
            logger.warning(f"capped_distance called with words longer than the length cap {length_cap}")
            raise PreconditionError(f"|u|, |v| must not exceed the length cap {length_cap}")

        caps = (length_cap, dist_cap)
        param_cap = _reverse_param_cap(system, length_cap)

        def result(distance, explored, path=None):
            derivation = None
            if with_derivation and path is not None:
                builder = DerivationBuilder(u)
                for redex in path:
                    builder.apply(redex)
                derivation = builder.build()
            status = DistanceStatus.EXACT if distance is not None else DistanceStatus.NOT_FOUND
            return CappedDistanceResult(
                u=u, v=v, distance=distance, status=status, caps=caps,
                explored=explored, mode=mode, derivation=derivation,
            )

        if u == v:
            return result(0, 1, [])

        try:
            if mode == DistanceMode.FORWARD:
                parents: Parents = {u: None}
                frontier = [u]
                for depth in range(1, dist_cap + 1):
                    frontier = _expand(system, frontier, parents, length_cap, mode, param_cap)
                    if v in parents:
                        return result(depth, len(parents), _path_to(parents, v))
                    if not frontier:
                        break
                return result(None, len(parents))

            from_u: Parents = {u: None}
            from_v: Parents = {v: None}
            frontier_u, frontier_v = [u], [v]
            depth_u = depth_v = 0

            while frontier_u and frontier_v and depth_u + depth_v < dist_cap:
                grow_u = len(frontier_u) <= len(frontier_v)
                if grow_u:
                    frontier_u = _expand(system, frontier_u, from_u, length_cap, mode, param_cap)
                    depth_u += 1
                    layer, other = frontier_u, from_v
                else:
                    frontier_v = _expand(system, frontier_v, from_v, length_cap, mode, param_cap)
                    depth_v += 1
                    layer, other = frontier_v, from_u

                meetings = [w for w in layer if w in other]
                if meetings:
                    # every meeting in this layer gives depth_u + depth_v steps
                    middle = min(meetings)
                    path = _path_to(from_u, middle)
                    path += [r.reversed() for r in reversed(_path_to(from_v, middle))]
                    distance = depth_u + depth_v
                    logger.debug(f"d({u}, {v}) = {distance}, explored {len(from_u) + len(from_v)}")
                    return result(distance, len(from_u) + len(from_v), path)

            return result(None, len(from_u) + len(from_v))
        except ThueKitError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error in capped_distance: {e}", exc_info=True)
            raise ThueKitError("distance search failed")

    @staticmethod
    def equivalent(
        system: RewritingSystem,
        u: Word,
        v: Word,
        length_cap: Optional[int] = None,
        dist_cap: Optional[int] = None,
    ) -> Optional[bool]:
        """True/False when decided, None when the capped search is inconclusive."""
        companion = complete_companion(system)
        if companion is not None:
            return RewritingService.normal_form(companion, u) == RewritingService.normal_form(companion, v)
        found = DehnService.capped_distance(system, u, v, length_cap, dist_cap)
        return True if found.exact else None

    @staticmethod
    def dehn_profile(
        system: RewritingSystem,
        max_n: int,
        length_cap: Optional[int] = None,
        dist_cap: Optional[int] = None,
    ) -> List[DehnProfilePoint]:
        """
        D(n) for n = 0..max_n: the largest capped distance between equivalent words
        of total length at most n
        """
        length_cap = settings.default_length_cap(max_n) if length_cap is None else length_cap
        logger.info(f"Dehn profile of {system.name} up to n={max_n}, length cap {length_cap}")
        if max_n > length_cap:
            raise PreconditionError(f"max_n {max_n} exceeds length cap {length_cap}")

        companion = complete_companion(system)
        words = list(enumerate_words(system.alphabet, max_n))

        # best[t]: (value, witness, undecided) over pairs with |u|+|v| == t
        best: Dict[int, Tuple[int, Optional[Tuple[Word, Word]], bool]] = {}
        for i, u in enumerate(words):
            for v in words[i + 1:]:
                total = u.length + v.length
                if total > max_n:
                    break
                if companion is not None:
                    if RewritingService.normal_form(companion, u) != RewritingService.normal_form(companion, v):
                        continue
                found = DehnService.capped_distance(system, u, v, length_cap, dist_cap)
                value, witness, undecided = best.get(total, (0, None, False))
                if not found.exact:
                    # with a companion the pair is known equivalent, so the miss is a cap artefact
                    best[total] = (value, witness, undecided or companion is not None)
                    continue
                if found.distance > value:
                    best[total] = (found.distance, (u, v), undecided)

        points = []
        value, witness, undecided = 0, None, False
        for n in range(max_n + 1):
            if n in best:
                v_n, w_n, u_n = best[n]
                undecided = undecided or u_n
                if v_n > value:
                    value, witness = v_n, w_n
            points.append(DehnProfilePoint(
                n=n,
                value=value,
                witness=witness,
                status=DistanceStatus.NOT_FOUND if undecided else DistanceStatus.EXACT,
            ))
        logger.info(f"Dehn profile of {system.name}: {[p.value for p in points]}")
        return points

    @staticmethod
    def write_profile_csv(points: List[DehnProfilePoint], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "D(n)", "witness_u", "witness_v", "status"])
            for point in points:
                u, v = point.witness if point.witness else ("", "")
                writer.writerow([point.n, point.value, str(u), str(v), point.status.value])
        logger.info(f"Wrote Dehn profile to {path}")
        return path

    @staticmethod
    def check_context_monotonicity(
        system: RewritingSystem,
        u: Word,
        v: Word,
        p: Word,
        q: Word,
        length_cap: Optional[int] = None,
        dist_cap: Optional[int] = None,
    ) -> bool:
        """d(puq, pvq) <= d(u, v), the context search getting |p|+|q| more room"""
        length_cap = settings.default_length_cap(u.length, v.length) if length_cap is None else length_cap
        inner = DehnService.capped_distance(system, u, v, length_cap, dist_cap)
        if not inner.exact:
            logger.warning(f"Monotonicity check on {u}, {v}: not equivalent within caps")
            raise PreconditionError(f"{u} and {v} are not connected within caps {inner.caps}")
        outer = DehnService.capped_distance(
            system, p + u + q, p + v + q, length_cap + p.length + q.length, inner.distance
        )
        return outer.exact and outer.distance <= inner.distance
