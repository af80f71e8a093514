from django.conf import settings
from rest_framework import serializers


class SessionConfigSerializer(serializers.Serializer):
    p = serializers.ChoiceField(choices=[2, 3, 5])
    d = serializers.IntegerField(min_value=1, max_value=3)
    N = serializers.IntegerField(min_value=1, max_value=6)
    m = serializers.IntegerField(min_value=0, max_value=4)
    cap = serializers.IntegerField(min_value=1, required=False)
    chain_limit = serializers.IntegerField(min_value=1, required=False)
    generators = serializers.IntegerField(min_value=1, default=1)

    def validate(self, data):
        """Check the character count and the module dimension against the caps."""
        cap = data.get('cap') or settings.IWASAWA['ENUMERATION_CAP']
        size = data['p'] ** (data['d'] * data['m'])
        if size > cap:
            raise serializers.ValidationError(
                {"m": f"{data['p']}^{data['d'] * data['m']} characters exceed the enumeration cap {cap}"},
                code='cap',
            )
        matrix_cap = settings.IWASAWA['MATRIX_DIMENSION_CAP']
        if data['generators'] * size > matrix_cap:
            raise serializers.ValidationError(
                {"generators": f"module dimension {data['generators'] * size} exceeds the cap {matrix_cap}"},
                code='cap',
            )
        data['cap'] = cap
        data.setdefault('chain_limit', settings.IWASAWA['CHAIN_ENUMERATION_LIMIT'])
        return data


class GridEntrySerializer(serializers.Serializer):
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    order_exp = serializers.IntegerField()
    p_rank = serializers.IntegerField()
    divisors = serializers.ListField(child=serializers.IntegerField())
    raw_order_exp = serializers.IntegerField()
    raw_p_rank = serializers.IntegerField()


class QuotientEntrySerializer(serializers.Serializer):
    n = serializers.IntegerField()
    order_exp = serializers.IntegerField()
    p_rank = serializers.IntegerField()
    divisors = serializers.ListField(child=serializers.IntegerField())


class StabilizationEntrySerializer(serializers.Serializer):
    n = serializers.IntegerField()
    stable_from = serializers.IntegerField()
    stabilized = serializers.BooleanField()


class TowerReportSerializer(serializers.Serializer):
    config = serializers.DictField(child=serializers.IntegerField())
    input = serializers.DictField()
    input_sha256 = serializers.CharField(source='input_digest', read_only=True)
    grid = GridEntrySerializer(many=True)
    quotients = QuotientEntrySerializer(many=True)
    stabilization = StabilizationEntrySerializer(many=True)
    summary = serializers.DictField(read_only=True)
    metadata = serializers.DictField()
