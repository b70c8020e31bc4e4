import unittest
from tangle_tribes import utils


class MyTestCase(unittest.TestCase):
    def test_split_letters(self):
        self.assertEqual(utils.split_letters("aB t"), [("a", 1), ("b", -1), ("t", 1)])

    def test_split_identity(self):
        self.assertEqual(utils.split_letters("1"), [])
        self.assertEqual(utils.split_letters("  "), [])

    def test_split_rejects_digits(self):
        with self.assertRaises(ValueError):
            utils.split_letters("a1")

    def test_join_letters(self):
        self.assertEqual(utils.join_letters([("a", 1), ("b", -1)]), "aB")
        self.assertEqual(utils.join_letters([]), "1")

    def test_invert_letter(self):
        self.assertEqual(utils.invert_letter("a"), "A")
        self.assertEqual(utils.invert_letter("T"), "t")

    def test_free_reduce_letters(self):
        self.assertEqual(utils.free_reduce_letters([(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]), [(2, 1)])

    def test_inverse_letters(self):
        self.assertEqual(utils.inverse_letters([(0, 1), (1, -1)]), [(1, 1), (0, -1)])

    def test_least_rotation(self):
        self.assertEqual(utils.least_rotation([3, 1, 2]), (1, 2, 3))
        self.assertEqual(utils.least_rotation([]), ())

    def test_smallest_period(self):
        self.assertEqual(utils.smallest_period([1, 2, 1, 2]), 2)
        self.assertEqual(utils.smallest_period([1, 2, 1]), 3)
        self.assertEqual(utils.smallest_period("aaaa"), 1)

    def test_lattice_reduction(self):
        echelon = utils.lattice_echelon([(2, 0), (0, 3)], 2)
        self.assertEqual(utils.reduce_mod_lattice((5, -1), echelon), (1, 2))

    def test_lattice_echelon_combines_rows(self):
        echelon = utils.lattice_echelon([(4, 0), (6, 0)], 2)
        self.assertEqual(echelon, [[2, 0]])

    def test_lattice_ignores_zero_vectors(self):
        self.assertEqual(utils.lattice_echelon([(0, 0)], 2), [])
        self.assertEqual(utils.reduce_mod_lattice((3, 4), []), (3, 4))

    def test_signs(self):
        self.assertEqual(utils.parse_sign("+"), 1)
        self.assertEqual(utils.parse_sign("-1"), -1)
        self.assertEqual(utils.format_sign(-1), "-")
        self.assertEqual(utils.format_signed(2), "+2")
        with self.assertRaises(ValueError):
            utils.parse_sign("x")

    def test_natural_key(self):
        self.assertEqual(sorted(["x10", "x2", "x1"], key=utils.natural_key), ["x1", "x2", "x10"])


if __name__ == '__main__':
    unittest.main()
