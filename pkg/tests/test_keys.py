import pytest

from airkey import derive_key, group_agreement


class TestDeriveKey:
    def test_deterministic(self):
        assert derive_key(30, 256, b"t") == derive_key(30, 256, b"t")

    def test_label_separates(self):
        assert derive_key(30, 256, b"a").key != derive_key(30, 256, b"b").key

    def test_length(self):
        k = derive_key(30, 512)
        assert k.bit_length == 512
        assert len(k.key) == 64
        assert len(k.hex) == 128

    def test_avalanche(self):
        # flipping the secret by one should flip about half the bits,
        # over many label variations
        distances = []
        for i in range(1000):
            label = i.to_bytes(2, "big")
            a = int.from_bytes(derive_key(30, 256, label).key, "big")
            b = int.from_bytes(derive_key(31, 256, label).key, "big")
            distances.append((a ^ b).bit_count())
        assert all(88 <= d <= 168 for d in distances)  # 128 +/- 40
        mean = sum(distances) / len(distances)
        assert 120 < mean < 136

    def test_rejects_tiny_secret(self):
        with pytest.raises(ValueError):
            derive_key(1)

    @pytest.mark.parametrize("bits", [0, 7, 12])
    def test_rejects_bad_length(self, bits):
        with pytest.raises(ValueError):
            derive_key(30, bits)

    def test_identical_secrets_identical_keys(self):
        secrets = [30, 30, 30]
        keys = {derive_key(s).key for s in secrets}
        assert len(keys) == 1


class TestGroupAgreement:
    def test_unanimous(self):
        r = group_agreement([6, 6, 6])
        assert r.agreed and r.agreeing_fraction == 1.0

    def test_one_failure(self):
        r = group_agreement([6, 6, None])
        assert not r.agreed
        assert r.agreeing_fraction == pytest.approx(2 / 3)

    def test_majority_value(self):
        r = group_agreement([6, 10, 6])
        assert not r.agreed
        assert r.agreeing_fraction == pytest.approx(2 / 3)

    def test_all_failed(self):
        r = group_agreement([None, None])
        assert not r.agreed and r.agreeing_fraction == 0.0

    def test_empty(self):
        assert not group_agreement([]).agreed
