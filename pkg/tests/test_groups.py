import pytest

from core.errors import SpecError, UnknownGroupElement
from core.groups import (
    FiniteGroup, Permutation, abelianization, cyclic_decomposition, cyclic_product, group_from_spec,
    homs_to_roots, orbits, subgroup_closure,
)
from core.scalars import ONE, root_of_unity


class TestCyclicProduct:
    def test_names_and_aliases(self, z3):
        """Test element names of a single cyclic factor"""
        assert z3.names == ("e", "g", "g^2")
        assert z3.index("g^2") == 2
        assert z3.index("g2") == 2
        assert z3.index("2") == 2
        assert z3.index("e") == 0

    def test_product_names(self):
        G = cyclic_product([2, 2])
        assert G.order == 4
        assert G.index("(1,0)") == G.index("1,0")
        assert G.mul(G.index("1,0"), G.index("0,1")) == G.index("1,1")
        assert str(G) == "Z2xZ2"

    def test_unknown_element(self, z2):
        with pytest.raises(UnknownGroupElement):
            z2.index("h")

    def test_bad_orders(self):
        with pytest.raises(SpecError):
            cyclic_product([0])


@pytest.mark.parametrize("spec, order", [("Z2", 2), ("Z2xZ4", 8), ("trivial", 1), ("Z3", 3)])
def test_group_from_spec(spec, order):
    """Test textual group specs"""
    assert group_from_spec(spec).order == order


def test_group_from_spec_rejects_garbage():
    with pytest.raises(SpecError):
        group_from_spec("S3")


def test_group_from_csv_table(tmp_path):
    """Test a group given by its multiplication table"""
    path = tmp_path / "z2.csv"
    path.write_text(",e,a\ne,e,a\na,a,e\n")
    G = group_from_spec(f"table:{path}")
    assert G.order == 2
    assert G.mul(G.index("a"), G.index("a")) == G.identity


def test_non_latin_table_rejected():
    with pytest.raises(SpecError):
        FiniteGroup(table=((0, 1), (0, 1)), names=("e", "a"))


class TestPermutations:
    def test_compose_and_inverse(self):
        s = Permutation.from_cycles(3, [(1, 2, 3)])
        assert s.images == (2, 3, 1)
        assert s.compose(s.inverse()).is_identity()
        assert s.compose(s).compose(s).is_identity()
        assert str(s) == "(1 2 3)"

    def test_subgroup_closure(self):
        """Test closure through sympy's permutation groups"""
        s = Permutation.from_cycles(4, [(1, 2, 3, 4)])
        closure = subgroup_closure(4, [s])
        assert len(closure) == 4
        assert Permutation.identity(4) in closure
        both = subgroup_closure(3, [Permutation.from_cycles(3, [(1, 2)]), Permutation.from_cycles(3, [(1, 2, 3)])])
        assert len(both) == 6

    def test_orbits(self):
        H = [Permutation.identity(4), Permutation.from_cycles(4, [(1, 3), (2, 4)])]
        assert orbits(H, 4) == [[1, 3], [2, 4]]
        assert orbits([Permutation.identity(3)], 3) == [[1], [2], [3]]

    def test_from_permutations_table(self):
        s = Permutation.from_cycles(3, [(1, 2, 3)])
        G = FiniteGroup.from_permutations([Permutation.identity(3), s, s.compose(s)])
        assert G.order == 3
        assert G.is_abelian()
        assert G.permutations[0].is_identity()
        assert G.element_order(1) == 3


class TestCharacters:
    def test_abelianization_of_s3(self):
        """Test S3 / A3 has order 2"""
        S3 = FiniteGroup.from_permutations(
            subgroup_closure(3, [Permutation.from_cycles(3, [(1, 2)]), Permutation.from_cycles(3, [(1, 2, 3)])])
        )
        Q, projection = abelianization(S3)
        assert Q.order == 2
        assert {projection(a) for a in S3.elements} == {0, 1}

    def test_cyclic_decomposition_of_z2xz4(self):
        G = cyclic_product([2, 4])
        orders = sorted(d for _, d in cyclic_decomposition(G))
        assert orders == [2, 4]

    @pytest.mark.parametrize("orders, r, count", [([2], 2, 2), ([3], 2, 1), ([3], 6, 3), ([2, 2], 2, 4),
                                                  ([4], 2, 2), ([4], 4, 4)])
    def test_homs_to_roots_count(self, orders, r, count):
        """Test |Hom(G, mu_r)| = prod gcd(d_i, r)"""
        G = cyclic_product(orders)
        characters = homs_to_roots(G, r)
        assert len(characters) == count
        assert characters[0].is_trivial()
        assert all(c.is_homomorphism() for c in characters)

    def test_z3_character_into_mu6(self, z3):
        characters = homs_to_roots(z3, 6)
        values = {c(1) for c in characters}
        assert values == {ONE, root_of_unity(3, 1), root_of_unity(3, 2)}

    def test_s3_characters(self):
        """Test S3 has exactly the sign and the trivial character into mu_2"""
        S3 = FiniteGroup.from_permutations(
            subgroup_closure(3, [Permutation.from_cycles(3, [(1, 2)]), Permutation.from_cycles(3, [(1, 2, 3)])])
        )
        characters = homs_to_roots(S3, 6)
        assert len(characters) == 2
        sign = characters[1]
        transposition = Permutation.from_cycles(3, [(1, 2)])
        assert sign.value_of(transposition) == -ONE
