/** Wires the interactive behaviour onto a rendered wiki page. */

import { ApiClient } from './api';
import { StatePanel } from './state-panel';
import { attachIslands } from './islands';
import { SceneEditor } from './editor';

export interface PageControls {
  panel: StatePanel;
  editors: SceneEditor[];
}

export function initPage(root: HTMLElement, api: ApiClient = new ApiClient()): PageControls {
  const panel = new StatePanel(api, root);
  panel.attach(root);
  attachIslands(root);

  const editors: SceneEditor[] = [];
  root.querySelectorAll<HTMLElement>('.scene-code').forEach((scene) => {
    const button = scene.querySelector<HTMLButtonElement>('button.edit-scene');
    if (!button) return;
    button.addEventListener('click', () => {
      const frame = scene.querySelector<HTMLElement>('.frame[data-doc]');
      const doc = frame?.dataset.doc ?? root.dataset.doc;
      if (!doc) return;
      const editor = new SceneEditor(api, doc, scene);
      editor.textarea.value = scene.querySelector('pre')?.textContent ?? '';
      editors.push(editor);
      panel.invalidate();
    });
  });
  return { panel, editors };
}

declare global {
  interface Window {
    initPage?: typeof initPage;
  }
}

if (typeof window !== 'undefined') {
  window.initPage = initPage;
}
