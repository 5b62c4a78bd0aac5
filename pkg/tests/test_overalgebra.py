import json

import pytest

from conlat import (
    OverISpec,
    OverIISpec,
    Partition,
    UnaryAlgebra,
    build_i,
    build_ii,
    con,
    formula_star_i,
    formula_star_ii,
    formula_tilde_i,
    formula_tilde_ii,
    hat_of,
    load_spec,
    predicted_shape_i,
    predicted_shape_ii,
    star_of,
)
from conlat.overalgebra import overi_spec_from_dict, overii_spec_from_dict
from conftest import (
    ALPHA_HAT_02,
    ALPHA_STAR_02,
    BETA_STAR_02,
    DELTA_STAR_02,
    GAMMA_STAR_02,
    PRINTED_TABLE_02,
)

SUB = (0, 1, 2, 3, 4, 5)


class TestSpecValidation:
    def test_tiepoint_range(self, s3set):
        with pytest.raises(ValueError):
            OverISpec(s3set, (0, 9))

    def test_blocks_must_cover_indices(self, s3set):
        with pytest.raises(ValueError):
            OverISpec(s3set, (0, 2), blocks=[[1]])
        with pytest.raises(ValueError):
            OverISpec(s3set, (0, 2), blocks=[[1, 2], [2]])

    def test_default_blocks(self, s3set):
        assert OverISpec(s3set, (0, 2)).blocks == ((1, 2),)
        assert OverISpec(s3set, ()).blocks == ()
        assert OverIISpec(s3set, [(0, 3)]).blocks == ((0, 2),)
        assert OverIISpec(s3set, [(0, 3)], u=2).blocks == ((0, 2, 4),)

    def test_pair_validation(self, s3set):
        with pytest.raises(ValueError):
            OverIISpec(s3set, [])
        with pytest.raises(ValueError):
            OverIISpec(s3set, [(0, 9)])
        with pytest.raises(ValueError):
            OverIISpec(s3set, [(0, 3)], u=0)
        with pytest.raises(ValueError):
            OverIISpec(s3set, [(0, 3)], blocks=[[0]])


class TestBuildI:
    def test_published_16_element_expansion(self, s3set):
        res = build_i(OverISpec(s3set, (0, 2)))
        assert res.ambient.n == 16
        assert res.ambient.symbols == list(PRINTED_TABLE_02)
        for sym, expected in PRINTED_TABLE_02.items():
            assert res.ambient.table(sym) == tuple(expected), sym
        assert res.embedding.copies == (
            tuple(range(6)),
            (0, 6, 7, 8, 9, 10),
            (11, 12, 2, 13, 14, 15),
        )
        assert res.embedding.tie_elements == (0, 2)
        assert res.retraction == "e0"

    def test_copy_layout_skips_tiepoint(self, s3set):
        res = build_i(OverISpec(s3set, (0, 3)))
        assert res.ambient.n == 16
        assert res.embedding.copies[2] == (11, 12, 13, 3, 14, 15)

    def test_no_tiepoints_degenerates_to_base(self, s3set):
        res = build_i(OverISpec(s3set, ()))
        assert res.ambient.n == 6
        assert res.ambient.table("e0") == tuple(range(6))
        assert len(con(res.ambient)) == len(con(s3set))

    def test_repeated_tiepoint(self, s3set):
        res = build_i(OverISpec(s3set, (0, 0)))
        assert res.ambient.n == 16
        e0 = res.ambient.table("e0")
        assert all(e0[e0[x]] == e0[x] for x in range(16))
        assert res.embedding.tie_elements == (0, 0)

    def test_retraction_fixes_base(self, s3set):
        res = build_i(OverISpec(s3set, (0, 2, 3)))
        e0 = res.ambient.table("e0")
        assert e0[:6] == tuple(range(6))
        assert sorted(set(e0)) == list(range(6))


class TestFormulasI:
    def test_alpha_interval_ends(self, s3set, alpha):
        spec = OverISpec(s3set, (0, 2))
        assert formula_star_i(spec, alpha).bar() == ALPHA_STAR_02
        assert formula_tilde_i(spec, alpha).bar() == ALPHA_HAT_02

    def test_singleton_fibers(self, s3set, beta):
        spec = OverISpec(s3set, (0, 2))
        assert formula_star_i(spec, beta).bar() == BETA_STAR_02
        assert formula_tilde_i(spec, beta).bar() == BETA_STAR_02

    def test_gamma_delta_least(self, s3set):
        spec = OverISpec(s3set, (0, 2))
        gamma = Partition.from_bar("|0,4|1,5|2,3|")
        delta = Partition.from_bar("|0,5|1,3|2,4|")
        assert formula_star_i(spec, gamma).bar() == GAMMA_STAR_02
        assert formula_star_i(spec, delta).bar() == DELTA_STAR_02

    def test_rejects_non_congruence(self, s3set):
        spec = OverISpec(s3set, (0, 2))
        with pytest.raises(ValueError):
            formula_star_i(spec, Partition.from_bar("|0,1|2|3|4|5|"))

    @pytest.mark.parametrize("ties", [(0, 2), (0, 3), (0, 0), (0, 2, 3)])
    def test_formulas_agree_with_generic_maps(self, s3set, ties):
        """Closed forms must reproduce the residuation maps computed
        from scratch on the built algebra."""
        spec = OverISpec(s3set, ties)
        amb = build_i(spec).ambient
        for p in con(s3set):
            assert formula_star_i(spec, p) == star_of(amb, SUB, p)
            assert formula_tilde_i(spec, p) == hat_of(amb, SUB, "e0", p)

    def test_split_blocks_change_greatest(self, s3set, alpha):
        joined = OverISpec(s3set, (0, 2), blocks=[[1, 2]])
        split = OverISpec(s3set, (0, 2), blocks=[[1], [2]])
        assert formula_star_i(joined, alpha) == formula_star_i(split, alpha)
        assert formula_tilde_i(split, alpha) == formula_star_i(split, alpha)
        assert formula_tilde_i(joined, alpha) != formula_tilde_i(split, alpha)


class TestShapeI:
    def test_alpha_fiber_two_elements(self, s3set, alpha):
        shape = predicted_shape_i(OverISpec(s3set, (0, 2)), alpha)
        assert shape.label() == "2"
        assert shape.size() == 2

    def test_spread_tiepoints_trivial(self, s3set, beta):
        for p_bar in ["|0,3|1,4|2,5|", "|0,4|1,5|2,3|", "|0,5|1,3|2,4|"]:
            shape = predicted_shape_i(
                OverISpec(s3set, (0, 2)), Partition.from_bar(p_bar)
            )
            assert shape.is_trivial()

    def test_two_blocks(self, s3set, beta):
        spec = OverISpec(s3set, (0, 3, 2, 5), blocks=[[1, 2], [3, 4]])
        assert predicted_shape_i(spec, beta).size() == 16


class TestBuildII:
    def test_chain_of_three(self, s3set):
        res = build_ii(OverIISpec(s3set, [(0, 3)]))
        amb = res.ambient
        assert amb.n == 16
        assert amb.symbols == [
            "q_0_0", "q_1_0", "q_2_0", "q_0_1", "q_0_2", "g0e0", "g1e0",
        ]
        assert res.embedding.copies == (
            tuple(range(6)),
            (0, 6, 7, 8, 9, 10),
            (8, 11, 12, 13, 14, 15),
        )
        assert res.embedding.tie_elements == (0, 0, 8)
        assert res.retraction == "q_0_0"
        assert amb.table("q_0_0") == (
            0, 1, 2, 3, 4, 5, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5,
        )
        assert amb.table("q_1_0") == (
            0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 3, 3, 3, 3, 3,
        )
        assert amb.table("q_0_2") == (
            8, 11, 12, 13, 14, 15, 8, 8, 8, 8, 8, 11, 12, 13, 14, 15,
        )

    def test_pullbacks_invert_copies(self, s3set):
        for spec in [
            OverIISpec(s3set, [(0, 3)]),
            OverIISpec(s3set, [(0, 3)], u=2),
            OverIISpec(s3set, [(0, 3), (1, 4)]),
        ]:
            res = build_ii(spec)
            for i, copy in enumerate(res.embedding.copies):
                q = res.ambient.table(f"q_{i}_0")
                assert all(q[copy[b]] == b for b in range(s3set.n))

    def test_longer_chain_layout(self, s3set):
        res = build_ii(OverIISpec(s3set, [(0, 3)], u=2))
        assert res.ambient.n == 26
        copies = res.embedding.copies
        assert copies[3] == (8, 16, 17, 18, 19, 20)
        assert copies[4] == (18, 21, 22, 23, 24, 25)
        # neighbours share exactly the anchor element
        for j in range(4):
            assert set(copies[j]) & set(copies[j + 1])

    def test_tiny_base_rejected(self):
        one = UnaryAlgebra(1, [("f", (0,))])
        with pytest.raises(ValueError):
            build_ii(OverIISpec(one, [(0, 0)]))


class TestFormulasII:
    def test_least_and_greatest(self, s3set, beta):
        spec = OverIISpec(s3set, [(0, 3)])
        assert (
            formula_star_ii(spec, beta).bar()
            == "|0,3,8,13|1,4|2,5|6,9|7,10|11,14|12,15|"
        )
        assert (
            formula_tilde_ii(spec, beta).bar()
            == "|0,3,8,13|1,4,11,14|2,5,12,15|6,9|7,10|"
        )

    def test_rejects_unrelated_congruence(self, s3set, alpha):
        # alpha does not relate the generating pair (0,3)
        with pytest.raises(ValueError):
            formula_star_ii(OverIISpec(s3set, [(0, 3)]), alpha)

    def test_formulas_agree_with_generic_maps(self, s3set, beta):
        top = Partition.top(6)
        for spec in [
            OverIISpec(s3set, [(0, 3)]),
            OverIISpec(s3set, [(0, 3)], u=2),
            OverIISpec(s3set, [(0, 3)], u=2, blocks=[[0, 2], [4]]),
        ]:
            res = build_ii(spec)
            for p in [beta, top]:
                assert formula_star_ii(spec, p) == star_of(res.ambient, SUB, p)
                assert formula_tilde_ii(spec, p) == hat_of(
                    res.ambient, SUB, "q_0_0", p
                )


class TestShapeII:
    def test_window(self, s3set, alpha, beta):
        spec = OverIISpec(s3set, [(0, 3)])
        assert predicted_shape_ii(spec, beta).label() == "2^2"
        assert predicted_shape_ii(spec, alpha).is_trivial()  # beta not below
        assert predicted_shape_ii(spec, Partition.top(6)).is_trivial()

    def test_block_sizes_drive_growth(self, s3set, beta):
        grown = OverIISpec(s3set, [(0, 3)], u=2)
        assert predicted_shape_ii(grown, beta).label() == "Eq(3)^2"
        assert predicted_shape_ii(grown, beta).size() == 25
        flat = OverIISpec(s3set, [(0, 3)], u=2, blocks=[[0], [2], [4]])
        assert predicted_shape_ii(flat, beta).is_trivial()


class TestSpecJson:
    def test_round_trip_i(self, s3set):
        spec = OverISpec(s3set, (0, 2, 3), blocks=[[1, 3], [2]])
        again = overi_spec_from_dict(spec.to_dict())
        assert again.tiepoints == spec.tiepoints
        assert again.blocks == spec.blocks
        assert again.base.ops == s3set.ops

    def test_round_trip_ii(self, s3set):
        spec = OverIISpec(s3set, [(0, 3)], u=2, blocks=[[0, 2], [4]])
        again = overii_spec_from_dict(spec.to_dict())
        assert again.gen_pairs == spec.gen_pairs
        assert again.u == 2
        assert again.blocks == spec.blocks

    def test_load_spec_dispatch(self, s3set, tmp_path):
        p1 = tmp_path / "i.json"
        p1.write_text(json.dumps(OverISpec(s3set, (0, 2)).to_dict()))
        assert isinstance(load_spec(str(p1)), OverISpec)
        p2 = tmp_path / "ii.json"
        p2.write_text(json.dumps(OverIISpec(s3set, [(0, 3)]).to_dict()))
        assert isinstance(load_spec(str(p2)), OverIISpec)

    def test_load_spec_base_as_path(self, s3set, tmp_path):
        alg = tmp_path / "base.json"
        alg.write_text(s3set.dumps())
        doc = {"base": str(alg), "tiepoints": [0, 2], "blocks": [[1, 2]]}
        p = tmp_path / "spec.json"
        p.write_text(json.dumps(doc))
        spec = load_spec(str(p))
        assert isinstance(spec, OverISpec)
        assert spec.base.n == 6

    def test_load_spec_rejects_unknown(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{}")
        with pytest.raises(ValueError):
            load_spec(str(p))
