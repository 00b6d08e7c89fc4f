/**
 * Entry point: boot the builder against the service, keep the URL hash in
 * sync with the canonical expression (shareable links), and react to
 * pasted links.
 */

import { ApiClient } from './api.js';
import { Builder, decodeHash } from './state.js';
import { BuilderView } from './ui.js';

async function boot(): Promise<void> {
    const base = (window as { MDL_API_BASE?: string }).MDL_API_BASE ?? '';
    const api = new ApiClient(base);
    let view: BuilderView | null = null;
    const builder = new Builder(api, (state) => view?.render(state));
    view = new BuilderView(builder);

    await builder.init();
    view.wire();

    const fromHash = decodeHash(window.location.hash);
    if (fromHash) {
        try {
            await builder.loadExpression(fromHash);
        } catch {
            // A bad hash falls back to the all-rights-reserved view.
        }
    }
    view.render(builder.state);

    window.addEventListener('hashchange', () => {
        const expression = decodeHash(window.location.hash);
        if (expression && expression !== builder.state.canonical) {
            void builder.loadExpression(expression);
        }
    });
}

void boot().catch((err) => {
    const banner = document.getElementById('error-banner');
    if (banner) {
        banner.hidden = false;
        banner.textContent = `Could not reach the MDL service: ${String(err)}. Start it with mdl-service and reload.`;
    }
});
