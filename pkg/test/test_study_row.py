# coding: utf-8

"""
    SynMatch

    Ablation and fusion study rows.
"""  # noqa: E501


import unittest

from synmatch.models.fusion_mode import FusionMode
from synmatch.models.study_row import StudyRow


class TestStudyRow(unittest.TestCase):
    """StudyRow unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def make_instance(self, include_optional: bool) -> StudyRow:
        """Test StudyRow
            include_optional is a boolean, when False only required
            params are included, when True both required and
            optional params are included """
        if include_optional:
            return StudyRow(
                run="fixmatch",
                use_l_org=True,
                use_l_syn=False,
                fusion=FusionMode.SHAPE,
                mean_dsc=0.61,
                mean_asd=3.25,
                split_ids_hash="0123456789ab",
            )
        return StudyRow(
            run="synmatch",
            use_l_org=True,
            use_l_syn=True,
            mean_dsc=0.7,
            mean_asd=2.0,
            split_ids_hash="0123456789ab",
        )

    def testStudyRow(self) -> None:
        """Test StudyRow"""
        inst_req_only = self.make_instance(include_optional=False)
        inst_req_and_optional = self.make_instance(include_optional=True)
        self.assertEqual(inst_req_only.fusion, FusionMode.WEIGHTED)
        self.assertEqual(inst_req_and_optional.fusion, FusionMode.SHAPE)

    def test_ablation_row(self) -> None:
        """Test case for the ablation CSV columns"""
        row = self.make_instance(include_optional=True).to_ablation_row()
        self.assertEqual(list(row), StudyRow.ABLATION_HEADER)
        self.assertEqual((row["use_l_org"], row["use_l_syn"]), (1, 0))
        self.assertEqual(row["mean_dsc"], "0.610000")

    def test_fusion_row(self) -> None:
        """Test case for the fusion CSV columns"""
        row = self.make_instance(include_optional=True).to_fusion_row()
        self.assertEqual(list(row), StudyRow.FUSION_HEADER)
        self.assertEqual(row["fusion"], "shape")


if __name__ == '__main__':
    unittest.main()
