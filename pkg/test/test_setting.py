# coding: utf-8

"""
    SynMatch

    Setting enum.
"""  # noqa: E501


import unittest

from synmatch.models.setting import Setting


class TestSetting(unittest.TestCase):
    """Setting unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def testSetting(self) -> None:
        """Test Setting"""
        self.assertIs(Setting.from_json('"bsl"'), Setting.BSL)
        self.assertEqual(Setting.BSL.value, "bsl")
        with self.assertRaises(ValueError):
            Setting.from_json('"unknown"')


if __name__ == '__main__':
    unittest.main()
