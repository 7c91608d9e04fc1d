import { createSession, fetchObjects } from './api';
import { store } from './store';
import { renderWizard } from './wizard';

async function boot(root: HTMLElement): Promise<void> {
  try {
    const [catalog, session] = await Promise.all([fetchObjects(), createSession()]);
    store.set({
      objects: catalog.objects,
      sessionId: session.id,
      version: session.version,
    });
    renderWizard(root);
  } catch (err) {
    const failure = document.createElement('div');
    failure.className = 'banner blocking';
    failure.setAttribute('role', 'alert');
    failure.textContent = `could not reach the planning service: ${String(err)}`;
    root.appendChild(failure);
  }
}

const root = document.getElementById('app');
if (root) {
  void boot(root);
}
