import { beforeEach, describe, expect, it, vi } from 'vitest';
import { ApiClient } from '../src/api';
import { StatePanel } from '../src/state-panel';

// State numbers for the four frames of the worked example script.
const STATES = [0, 1, 2, 2];

function fakeFetch() {
  return vi.fn(async (url: string) => {
    const m = /\/state\/(.+)\/(\d+)$/.exec(url);
    if (!m) return { ok: false, status: 404 } as Response;
    const frame = Number(m[2]);
    return {
      ok: true,
      status: 200,
      json: async () => ({ response: `response for frame ${frame}`, state: STATES[frame] }),
    } as unknown as Response;
  });
}

function pageWithFrames(): HTMLElement {
  const root = document.createElement('div');
  root.innerHTML = [0, 1, 2, 3]
    .map((i) => `<span class="frame" data-doc="src/example.ml" data-frame="${i}">cmd ${i}</span>`)
    .join('\n');
  document.body.appendChild(root);
  return root;
}

describe('StatePanel', () => {
  beforeEach(() => {
    document.body.innerHTML = '';
  });

  it('hover issues exactly one state fetch and shows the state number', async () => {
    const fetchMock = fakeFetch();
    vi.stubGlobal('fetch', fetchMock);
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);
    panel.attach(root);

    const frame = root.querySelector<HTMLElement>('[data-frame="2"]')!;
    frame.dispatchEvent(new Event('mouseenter'));
    await vi.waitFor(() => {
      expect(panel.element.querySelector('.state-number')?.textContent).toBe('state 2');
    });
    expect(fetchMock).toHaveBeenCalledTimes(1);
    expect(fetchMock).toHaveBeenCalledWith('/state/src/example.ml/2');
  });

  it('every frame of the worked example shows its recorded state number', async () => {
    vi.stubGlobal('fetch', fakeFetch());
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);
    panel.attach(root);
    for (let i = 0; i < 4; i++) {
      await panel.show('src/example.ml', i);
      expect(panel.element.querySelector('.state-number')?.textContent).toBe(`state ${STATES[i]}`);
    }
  });

  it('repeated hover reuses the memoized state without a second request', async () => {
    const fetchMock = fakeFetch();
    vi.stubGlobal('fetch', fetchMock);
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);
    panel.attach(root);

    const frame = root.querySelector<HTMLElement>('[data-frame="1"]')!;
    frame.dispatchEvent(new Event('mouseenter'));
    frame.dispatchEvent(new Event('mouseenter'));
    await panel.show('src/example.ml', 1);
    expect(fetchMock).toHaveBeenCalledTimes(1);
  });

  it('distinct frames are fetched independently', async () => {
    const fetchMock = fakeFetch();
    vi.stubGlobal('fetch', fetchMock);
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);
    await panel.show('src/example.ml', 0);
    await panel.show('src/example.ml', 3);
    expect(fetchMock).toHaveBeenCalledTimes(2);
    expect(panel.element.querySelector('.state-number')?.textContent).toBe('state 2');
  });

  it('a failed fetch shows a retry control and the retry refetches', async () => {
    let calls = 0;
    const fetchMock = vi.fn(async (url: string) => {
      calls += 1;
      if (calls === 1) return { ok: false, status: 502 } as Response;
      return {
        ok: true,
        status: 200,
        json: async () => ({ response: 'recovered', state: 1 }),
      } as unknown as Response;
    });
    vi.stubGlobal('fetch', fetchMock);
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);

    await panel.show('src/example.ml', 1);
    const retry = panel.element.querySelector<HTMLButtonElement>('.state-retry');
    expect(retry).not.toBeNull();
    expect(panel.element.querySelector('.state-error')?.textContent).toContain('502');

    retry!.click();
    await vi.waitFor(() => {
      expect(panel.element.querySelector('.state-number')?.textContent).toBe('state 1');
    });
    expect(fetchMock).toHaveBeenCalledTimes(2);
  });

  it('invalidate drops the memoized states', async () => {
    const fetchMock = fakeFetch();
    vi.stubGlobal('fetch', fetchMock);
    const root = pageWithFrames();
    const panel = new StatePanel(new ApiClient(), root);
    await panel.show('src/example.ml', 1);
    panel.invalidate();
    await panel.show('src/example.ml', 1);
    expect(fetchMock).toHaveBeenCalledTimes(2);
  });
});
