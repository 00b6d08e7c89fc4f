/**
 * One-click what-if presets: the classic equities-dataset scenarios a
 * trading shop would ask about (historical prices/volumes licensed under
 * each model right).
 */

import { CheckQuery } from './api.js';

export interface Preset {
    id: string;
    label: string;
    query: CheckQuery;
}

export const PRESETS: Preset[] = [
    {
        id: 'retain-weights',
        label: 'Keep the trained model’s weights after evaluating it',
        query: { capability: 'retain-trained-model', asset: 'trained-model' },
    },
    {
        id: 'trade-internally',
        label: 'Trade proprietary capital on the model’s predictions',
        query: { capability: 'use-output-internally', asset: 'output' },
    },
    {
        id: 'serve-predictions',
        label: 'Sell predictions to clients through a SaaS API',
        query: { capability: 'provide-output-third-party', asset: 'output' },
    },
    {
        id: 'sell-model',
        label: 'Sell a copy of the model itself',
        query: { capability: 'provide-model-third-party', asset: 'trained-model' },
    },
    {
        id: 'show-results',
        label: 'Publish benchmark results of the training run',
        query: { capability: 'show-training-results', asset: 'trained-model' },
    },
    {
        id: 'publish-model',
        label: 'Share the model with researchers (research/publication only)',
        query: { capability: 'publish-model-restricted', asset: 'trained-model' },
    },
];
