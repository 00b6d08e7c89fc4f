import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { Builder, decodeHash, encodeHash, selectionFromGrant } from '../src/state.js';
import { fixtures, jsonResponse, stubFetch } from './stub.js';

async function freshBuilder(): Promise<Builder> {
    const builder = new Builder(new ApiClient('', stubFetch()));
    await builder.init();
    return builder;
}

describe('initialization', () => {
    it('starts all rights reserved with a server-confirmed empty closure', async () => {
        const builder = await freshBuilder();
        expect(builder.state.canonical).toBe('MDL-1.0');
        expect(builder.state.closure).toEqual({ data: [], model: [], restrictions: [] });
        expect(builder.impliedTokens()).toEqual([]);
        expect(builder.state.taxonomy?.rights).toHaveLength(11);
    });
});

describe('toggling rights', () => {
    it('selecting publish shows exactly the service-computed implied set', async () => {
        const builder = await freshBuilder();
        const prompt = await builder.toggleRight('publish');
        expect(prompt).toBeNull();
        expect(builder.state.canonical).toBe('MDL-1.0; model: publish');
        const fixtureClosure = fixtures.parse['MDL-1.0; model: publish'].closure;
        const expectedImplied = [...fixtureClosure.data, ...fixtureClosure.model].filter(
            (token) => token !== 'publish',
        );
        expect(builder.impliedTokens().sort()).toEqual(expectedImplied.sort());
        expect(builder.impliedTokens()).toContain('research');
        expect(builder.impliedTokens()).toContain('access');
    });

    it('selecting model-commercial implies every model right', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('model-commercial');
        const implied = builder.impliedTokens();
        for (const token of [
            'benchmark',
            'benchmark-trained',
            'research',
            'publish',
            'internal',
            'output-commercial',
            'access',
        ]) {
            expect(implied).toContain(token);
        }
    });

    it('deselecting everything returns to the all-rights-reserved view', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('publish');
        const prompt = await builder.toggleRight('publish');
        expect(prompt).toBeNull();
        expect(builder.state.canonical).toBe('MDL-1.0');
        expect(builder.impliedTokens()).toEqual([]);
    });

    it('displays whatever closure the service reports, never a local one', async () => {
        // Doctor the parse response: if the builder computed implications
        // itself, the doctored closure would not survive.
        const doctored = {
            ...fixtures.parse['MDL-1.0; model: publish'],
            closure: { data: [], model: ['publish'], restrictions: [] },
        };
        const inner = stubFetch();
        const builder = new Builder(
            new ApiClient('', async (url, init) => {
                const body = init?.body ? JSON.parse(init.body as string) : {};
                if (url.endsWith('/v1/parse') && body.expression === 'MDL-1.0; model: publish') {
                    return jsonResponse(doctored);
                }
                return inner(url, init);
            }),
        );
        await builder.init();
        await builder.toggleRight('publish');
        expect(builder.impliedTokens()).toEqual([]);
    });
});

describe('deselection conflicts', () => {
    it('prompts before removing a right that selected rights still imply', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('research');
        await builder.toggleRight('publish');
        expect(builder.state.canonical).toBe('MDL-1.0; model: research, publish');

        const prompt = await builder.toggleRight('research');
        expect(prompt).toEqual({ token: 'research', implying: ['publish'] });
        // State is untouched until the dialog is resolved.
        expect(builder.state.canonical).toBe('MDL-1.0; model: research, publish');

        await builder.confirmDeselect(prompt!);
        expect(builder.state.canonical).toBe('MDL-1.0');
    });

    it('dropping only some implying rights keeps the right implied', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('benchmark');
        await builder.toggleRight('research');
        const prompt = await builder.toggleRight('benchmark');
        expect(prompt).toEqual({ token: 'benchmark', implying: ['research'] });
        await builder.confirmDeselect(prompt!, []);
        expect(builder.state.canonical).toBe('MDL-1.0; model: research');
        expect(builder.impliedTokens()).toContain('benchmark');
    });
});

describe('restrictions', () => {
    it('attribution and confidential are mutually disabling', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('access');
        await builder.toggleRestriction('attribution');
        expect(builder.state.canonical).toBe('MDL-1.0; data: access; restrictions: attribution');
        await builder.toggleRestriction('confidential');
        expect(builder.state.selection.restrictions.attribution).toBe(false);
        expect(builder.state.selection.restrictions.confidential).toBe(true);
        expect(builder.state.canonical).toBe('MDL-1.0; data: access; restrictions: confidential');
    });
});

describe('shareable links', () => {
    it('exported expression round-trips through the URL hash', async () => {
        const original = await freshBuilder();
        await original.toggleRight('publish');
        const hash = original.shareHash();
        expect(hash).toBe(encodeHash('MDL-1.0; model: publish'));

        const restored = new Builder(new ApiClient('', stubFetch()));
        await restored.init();
        await restored.loadExpression(decodeHash(hash)!);
        expect(restored.state.canonical).toBe(original.state.canonical);
        expect([...restored.state.selection.model]).toEqual([
            ...original.state.selection.model,
        ]);
        expect(restored.state.closure).toEqual(original.state.closure);
        expect(restored.impliedTokens().sort()).toEqual(original.impliedTokens().sort());
    });

    it('loads composite expressions with restriction payloads', async () => {
        const builder = await freshBuilder();
        await builder.loadExpression(
            'MDL-1.0; data: access, distribute; model: research; restrictions: attribution, exclude(military)',
        );
        expect([...builder.state.selection.data]).toEqual(['access', 'distribute']);
        expect(builder.state.selection.restrictions.attribution).toBe(true);
        expect(builder.state.selection.restrictions.exclude).toEqual(['military']);
        expect(builder.state.canonical).toBe(
            'MDL-1.0; data: access, distribute; model: research; restrictions: attribution, exclude(military)',
        );
    });

    it('decodeHash rejects junk', () => {
        expect(decodeHash('')).toBeNull();
        expect(decodeHash('#')).toBeNull();
        expect(decodeHash('#%E0%A4%A')).toBeNull();
    });

    it('selectionFromGrant mirrors the grant document', () => {
        const selection = selectionFromGrant({
            data: ['access'],
            model: ['research'],
            restrictions: [
                { name: 'parties', payload: ['acme', 'zeta'] },
                { name: 'no-sublicense', payload: [] },
            ],
        });
        expect([...selection.data]).toEqual(['access']);
        expect(selection.restrictions.parties).toEqual(['acme', 'zeta']);
        expect(selection.restrictions.noSublicense).toBe(true);
    });
});

describe('license preview and export', () => {
    it('previews the generated text with its hash', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('publish');
        await builder.previewLicense();
        expect(builder.state.preview?.text).toContain('Montreal Data License');
        expect(builder.state.preview?.text).toContain('Grant-Expression: MDL-1.0; model: publish');
        expect(builder.state.preview?.hash).toMatch(/^[0-9a-f]{64}$/);
    });

    it('exports a sidecar with the canonical expression and text hash', async () => {
        const builder = await freshBuilder();
        await builder.toggleRight('publish');
        await builder.previewLicense();
        const sidecar = JSON.parse(builder.exportSidecar('Example Org'));
        expect(sidecar).toEqual({
            expression: 'MDL-1.0; model: publish',
            license_text_hash: builder.state.preview?.hash,
            licensor: { name: 'Example Org' },
            schema_version: '1',
        });
        expect(builder.exportSidecar('Example Org').endsWith('\n')).toBe(true);
    });
});

describe('resilience', () => {
    it('keeps the previous closure and surfaces a retry banner on failure', async () => {
        let broken = false;
        const inner = stubFetch();
        const builder = new Builder(
            new ApiClient('', async (url, init) => {
                if (broken && url.endsWith('/v1/parse')) {
                    return jsonResponse({ code: 'error', message: 'boom' }, 500);
                }
                return inner(url, init);
            }),
        );
        await builder.init();
        await builder.toggleRight('publish');
        const closureBefore = builder.state.closure;

        broken = true;
        await builder.toggleRight('internal');
        expect(builder.state.error).toContain('500');
        expect(builder.state.closure).toEqual(closureBefore);

        broken = false;
        await builder.refresh();
        expect(builder.state.error).toBeNull();
        expect(builder.state.canonical).toBe('MDL-1.0; model: publish, internal');
    });

    it('latest interaction wins when responses arrive out of order', async () => {
        const inner = stubFetch();
        let deferring = false;
        const pending: { url: string; release: () => void }[] = [];
        const builder = new Builder(
            new ApiClient('', (url, init) => {
                if (!deferring) return inner(url, init);
                return new Promise((resolve) => {
                    pending.push({ url, release: () => resolve(inner(url, init)) });
                });
            }),
        );
        await builder.init();
        deferring = true;

        builder.state.selection.model.add('publish');
        const first = builder.refresh();
        builder.state.selection.model.add('internal');
        const second = builder.refresh();
        expect(pending).toHaveLength(2);
        // Release the newer request first, then the stale one.
        pending[1].release();
        await second;
        expect(builder.state.canonical).toBe('MDL-1.0; model: publish, internal');
        pending[0].release();
        await first;
        expect(builder.state.canonical).toBe('MDL-1.0; model: publish, internal');
    });
});
