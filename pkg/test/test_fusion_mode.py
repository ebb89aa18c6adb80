# coding: utf-8

"""
    SynMatch

    FusionMode enum.
"""  # noqa: E501


import unittest

from synmatch.models.fusion_mode import FusionMode


class TestFusionMode(unittest.TestCase):
    """FusionMode unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def testFusionMode(self) -> None:
        """Test FusionMode"""
        self.assertIs(FusionMode.from_json('"texture"'), FusionMode.TEXTURE)
        self.assertEqual(FusionMode.TEXTURE.value, "texture")
        with self.assertRaises(ValueError):
            FusionMode.from_json('"unknown"')


if __name__ == '__main__':
    unittest.main()
