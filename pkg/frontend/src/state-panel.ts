/** On-demand proof-state display: hovering (or focusing) a rendered frame
 * fetches its prover state once and shows it in a shared pane. */

import { ApiClient, FrameState } from './api';

type Fetched = { kind: 'ok'; state: FrameState } | { kind: 'error'; message: string };

export class StatePanel {
  private cache = new Map<string, Promise<Fetched>>();
  readonly element: HTMLElement;

  constructor(private api: ApiClient, container: HTMLElement) {
    this.element = document.createElement('div');
    this.element.className = 'state-panel';
    container.appendChild(this.element);
  }

  /** Wire every .frame[data-doc][data-frame] under root. */
  attach(root: ParentNode): void {
    root.querySelectorAll<HTMLElement>('.frame[data-doc][data-frame]').forEach((el) => {
      el.tabIndex = 0; // keyboard-focus fallback for hover
      const show = () => this.show(el.dataset.doc!, Number(el.dataset.frame));
      el.addEventListener('mouseenter', show);
      el.addEventListener('focus', show);
    });
  }

  /** Drop memoized states (call when the document version changes). */
  invalidate(): void {
    this.cache.clear();
  }

  async show(doc: string, frame: number): Promise<void> {
    const key = `${doc}#${frame}`;
    let pending = this.cache.get(key);
    if (!pending) {
      pending = this.api
        .getState(doc, frame)
        .then((state): Fetched => ({ kind: 'ok', state }))
        .catch((err): Fetched => {
          this.cache.delete(key); // errors are retryable
          return { kind: 'error', message: String(err) };
        });
      this.cache.set(key, pending);
    }
    const result = await pending;
    if (result.kind === 'ok') {
      this.element.innerHTML = '';
      const heading = document.createElement('div');
      heading.className = 'state-number';
      heading.textContent = `state ${result.state.state}`;
      const body = document.createElement('pre');
      body.className = 'state-response';
      body.textContent = result.state.response;
      this.element.append(heading, body);
    } else {
      this.element.innerHTML = '';
      const error = document.createElement('div');
      error.className = 'state-error';
      error.textContent = result.message;
      const retry = document.createElement('button');
      retry.className = 'state-retry';
      retry.textContent = 'retry';
      retry.addEventListener('click', () => this.show(doc, frame));
      this.element.append(error, retry);
    }
  }
}
