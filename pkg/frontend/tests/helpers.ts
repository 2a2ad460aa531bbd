import type { RunPayload } from '../src/types';

import basePayload from './fixtures/run_payload.json';
import k4Payload from './fixtures/run_payload_k4.json';
import singletonPayload from './fixtures/run_payload_singleton.json';

export function runPayload(): RunPayload {
  return JSON.parse(JSON.stringify(basePayload)) as RunPayload;
}

export function runPayloadK4(): RunPayload {
  return JSON.parse(JSON.stringify(k4Payload)) as RunPayload;
}

export function runPayloadSingleton(): RunPayload {
  return JSON.parse(JSON.stringify(singletonPayload)) as RunPayload;
}

export function container(): HTMLElement {
  const el = document.createElement('div');
  document.body.appendChild(el);
  return el;
}
