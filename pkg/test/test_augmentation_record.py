# coding: utf-8

"""
    SynMatch

    Replayable augmentation records.
"""  # noqa: E501


import unittest

from synmatch.models.augmentation_config import AugmentationConfig
from synmatch.models.augmentation_record import AugmentationRecord, GeometricParams, IntensityParams, MixParams
from synmatch.models.mix_mode import MixMode


class TestAugmentationRecord(unittest.TestCase):
    """AugmentationRecord unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def make_instance(self, include_optional: bool) -> AugmentationRecord:
        """Test AugmentationRecord
            include_optional is a boolean, when False only required
            params are included, when True both required and
            optional params are included """
        if include_optional:
            return AugmentationRecord(
                geometric=GeometricParams(size=16, crop_top=2, crop_left=1, crop_size=12, rotation=180, flip_h=True),
                intensity=IntensityParams(brightness=0.1, contrast=1.2, blur_sigma=0.5),
                mix=MixParams(mode=MixMode.CUTMIX, partner_index=3, box=(0, 0, 4, 4)),
            )
        return AugmentationRecord(
            geometric=GeometricParams(size=16),
        )

    def testAugmentationRecord(self) -> None:
        """Test AugmentationRecord"""
        inst_req_only = self.make_instance(include_optional=False)
        inst_req_and_optional = self.make_instance(include_optional=True)
        self.assertFalse(inst_req_only.is_strong)
        self.assertTrue(inst_req_only.geometric.is_full_frame)
        self.assertTrue(inst_req_and_optional.is_strong)
        self.assertEqual(AugmentationRecord.from_json(inst_req_and_optional.to_json()), inst_req_and_optional)

    def test_identity(self) -> None:
        """Test case for the identity record"""
        record = AugmentationRecord.identity(8)
        self.assertEqual(record.geometric, GeometricParams(size=8))
        self.assertIsNone(record.intensity)
        self.assertIsNone(record.mix)

    def test_mix_payload(self) -> None:
        """Test case for mode-specific mix fields"""
        with self.assertRaises(ValueError):
            MixParams(mode=MixMode.CUTMIX, partner_index=0)
        with self.assertRaises(ValueError):
            MixParams(mode=MixMode.MIXUP, partner_index=0)
        with self.assertRaises(ValueError):
            MixParams(mode=MixMode.CUTMIX, partner_index=0, box=(4, 0, 2, 4))

    def test_config_ranges(self) -> None:
        """Test case for inverted ranges in AugmentationConfig"""
        with self.assertRaises(ValueError):
            AugmentationConfig(crop_scale_min=0.9, crop_scale_max=0.8)
        with self.assertRaises(ValueError):
            AugmentationConfig(cutmix_area_min=0.6, cutmix_area_max=0.5)


if __name__ == '__main__':
    unittest.main()
