import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { Builder } from '../src/state.js';
import { PRESETS } from '../src/presets.js';
import { stubFetch } from './stub.js';

// Expected verdict per grant x preset: true means forbidden. The trading
// shop scenarios: keep weights, trade internally, serve predictions,
// sell the model, publish benchmark results, share for research.
const EXPECTED: Record<string, Record<string, boolean>> = {
    'MDL-1.0': {
        'retain-weights': true,
        'trade-internally': true,
        'serve-predictions': true,
        'sell-model': true,
        'show-results': true,
        'publish-model': true,
    },
    'MDL-1.0; model: benchmark-trained': {
        'retain-weights': true,
        'trade-internally': true,
        'serve-predictions': true,
        'sell-model': true,
        'show-results': false,
        'publish-model': true,
    },
    'MDL-1.0; model: research': {
        'retain-weights': false,
        'trade-internally': true,
        'serve-predictions': true,
        'sell-model': true,
        'show-results': false,
        'publish-model': true,
    },
    'MDL-1.0; model: internal': {
        'retain-weights': false,
        'trade-internally': false,
        'serve-predictions': true,
        'sell-model': true,
        'show-results': false,
        'publish-model': true,
    },
    'MDL-1.0; model: output-commercial': {
        'retain-weights': false,
        'trade-internally': false,
        'serve-predictions': false,
        'sell-model': true,
        'show-results': false,
        'publish-model': true,
    },
    'MDL-1.0; model: model-commercial': {
        'retain-weights': false,
        'trade-internally': false,
        'serve-predictions': false,
        'sell-model': false,
        'show-results': false,
        'publish-model': false,
    },
};

describe('what-if presets', () => {
    it('offers six distinct scenario presets', () => {
        expect(PRESETS).toHaveLength(6);
        expect(new Set(PRESETS.map((p) => p.query.capability)).size).toBe(6);
    });

    for (const [expression, expectations] of Object.entries(EXPECTED)) {
        it(`matches the decision table under ${expression}`, async () => {
            const builder = new Builder(new ApiClient('', stubFetch()));
            await builder.init();
            await builder.loadExpression(expression);
            for (const preset of PRESETS) {
                const decision = await builder.whatIfCheck(preset.query);
                expect(decision, preset.id).not.toBeNull();
                const forbidden = decision!.verdict === 'forbidden';
                expect(forbidden, `${expression} / ${preset.id}`).toBe(
                    expectations[preset.id],
                );
            }
        });
    }

    it('selling the model flips from forbidden to permitted with model-commercial', async () => {
        const builder = new Builder(new ApiClient('', stubFetch()));
        await builder.init();

        await builder.loadExpression('MDL-1.0; model: output-commercial');
        const sellPreset = PRESETS.find((p) => p.id === 'sell-model')!;
        const underOutput = await builder.whatIfCheck(sellPreset.query);
        expect(underOutput?.verdict).toBe('forbidden');

        await builder.loadExpression('MDL-1.0; model: model-commercial');
        const underModel = await builder.whatIfCheck(sellPreset.query);
        expect(underModel?.verdict).toBe('permitted');
        expect(underModel?.trace).toContainEqual({
            right: 'model-commercial',
            capability: 'provide-model-third-party',
        });
    });

    it('attaches the downstream obligation when sharing for research', async () => {
        const builder = new Builder(new ApiClient('', stubFetch()));
        await builder.init();
        await builder.loadExpression('MDL-1.0; model: model-commercial');
        const preset = PRESETS.find((p) => p.id === 'publish-model')!;
        const decision = await builder.whatIfCheck(preset.query);
        expect(decision?.verdict).toBe('permitted-with-obligations');
        expect(decision?.obligations.map((o) => o.name)).toContain(
            'downstream-research-publication-only',
        );
    });
});
