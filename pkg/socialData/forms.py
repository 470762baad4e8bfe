from django import forms

from unifiedsocial import constants as CONS
from unifiedsocial.utils import listToChoices


class ConfigSectionForm(forms.Form):
    """
    A config file section. The data comes from YAML rather than a request, so booleans are nullable
    (a missing key must fall back to the default rather than read as False) and unknown keys are
    reported instead of being ignored.
    """
    defaults = {}

    def unknown_keys(self):
        return sorted(set(self.data) - set(self.fields))

    def clean(self):
        cleaned_data = super().clean()
        for name, default in self.defaults.items():
            if cleaned_data.get(name) in (None, ''):
                cleaned_data[name] = default
        return cleaned_data


class AdapterConfigForm(ConfigSectionForm):
    base = forms.CharField()
    format = forms.ChoiceField(choices=listToChoices(CONS.FORMAT_VALUES), required=False)
    platform = forms.CharField(required=False)
    field_map = forms.JSONField(required=False)

    def clean_field_map(self):
        field_map = self.cleaned_data['field_map'] or {}
        if not isinstance(field_map, dict) or \
                not all(isinstance(k, str) and isinstance(v, str) and k and v for k, v in field_map.items()):
            raise forms.ValidationError('must map schema keys to raw column names or dotted paths')
        return field_map


class AnonymizeConfigForm(ConfigSectionForm):
    defaults = {
        'algorithm': CONS.ALGORITHM_SHA256,
        'output_hex_len': 64,
        'chunk_rows': 5000,
        'ask_reinit': True,
    }

    src_db_name = forms.CharField()
    dst_db_name = forms.CharField()
    pepper_env = forms.CharField(required=False)
    pepper_file = forms.CharField(required=False)
    algorithm = forms.ChoiceField(choices=listToChoices(CONS.ALGORITHM_VALUES), required=False)
    output_hex_len = forms.IntegerField(required=False, min_value=CONS.MIN_OUTPUT_HEX_LEN)
    chunk_rows = forms.IntegerField(required=False, min_value=1)
    ask_reinit = forms.NullBooleanField(required=False)
    policy = forms.JSONField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('pepper_env') and cleaned_data.get('pepper_file'):
            raise forms.ValidationError('give pepper_env or pepper_file, not both')
        return cleaned_data


class EnricherConfigForm(ConfigSectionForm):
    defaults = {
        'user_template': '{body}',
        'only_missing': True,
        'reset_cache': False,
        'batch_size': 10,
        'max_tokens': 512,
        'target_kind': CONS.TARGET_KIND_POST,
        'mock_mode': CONS.MOCK_MODE_ECHO,
    }

    model_id_postfix = forms.CharField()
    chat_model_id = forms.CharField()
    provider_kind = forms.ChoiceField(choices=listToChoices(CONS.PROVIDER_KIND_VALUES))
    base_url = forms.CharField(required=False)
    api_key_env = forms.CharField(required=False)
    api_key_file = forms.CharField(required=False)
    system_prompt = forms.CharField(required=False, strip=False)
    user_template = forms.CharField(required=False, strip=False)
    only_missing = forms.NullBooleanField(required=False)
    reset_cache = forms.NullBooleanField(required=False)
    batch_size = forms.IntegerField(required=False, min_value=1)
    max_tokens = forms.IntegerField(required=False, min_value=1)
    parallelism = forms.IntegerField(required=False, min_value=1)
    target_kind = forms.ChoiceField(choices=listToChoices(CONS.TARGET_KIND_VALUES), required=False)
    target_filter = forms.JSONField(required=False)
    mock_mode = forms.ChoiceField(choices=listToChoices(CONS.MOCK_MODE_VALUES), required=False)
    mock_response = forms.CharField(required=False, strip=False)
    mock_fail_marker = forms.CharField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('api_key_env') and cleaned_data.get('api_key_file'):
            raise forms.ValidationError('give api_key_env or api_key_file, not both')
        return cleaned_data
