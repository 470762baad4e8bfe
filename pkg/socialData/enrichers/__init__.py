from .providers import (AnthropicProvider, GeminiProvider, MockProvider, OpenAICompatProvider, ProviderReply,
                        build_provider, provider_send)
from .runner import ENRICHERS, EnrichReport, EnricherConfig, TextGenEnricher, run_enricher
from .templates import render_prompt
